#include <iostream>
#include <stack>
#include <vector>
using namespace std;

bool balanced(vector<char>& s) {
    stack<char> st;
    for (int i = 0; i < s.size(); i++) {
        char c = s[i];
        if (c == '(')
            st.push(c);
        else {
            if (st.empty())
                return false;
            st.pop();
        }
    }
    return st.empty();
}

int main() {
    stack<int> s;
    for (int i = 1; i <= 4; i++)
        s.push(i * 10);
    while (!s.empty()) {
        cout << s.top() << " ";
        s.pop();
    }
    cout << endl;
    vector<char> good;
    good.push_back('(');
    good.push_back('(');
    good.push_back(')');
    good.push_back(')');
    vector<char> bad;
    bad.push_back(')');
    bad.push_back('(');
    cout << balanced(good) << balanced(bad) << endl;
    return 0;
}
