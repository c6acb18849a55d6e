#include <iostream>
#include <deque>
using namespace std;

int main() {
    deque<int> d;
    d.push_back(1);
    d.push_front(0);
    d.push_back(2);
    d.push_front(-1);
    cout << d.front() << " " << d.back() << " " << d.size() << endl;
    cout << d[0] << d[1] << d[2] << d[3] << endl;
    d.pop_front();
    d.pop_back();
    cout << d.front() << " " << d.back() << " " << d.size() << endl;
    return 0;
}
