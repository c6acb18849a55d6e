#include <iostream>
using namespace std;

int main() {
    int n = 10;
    n += 5;
    n -= 3;
    n *= 4;
    n /= 6;
    n %= 5;
    n++;
    n--;
    ++n;
    cout << n << endl;
    double d = 2;
    d *= 1.5;
    d += 1;
    cout << d << endl;
    string s = "ab";
    s += "cd";
    s = s + "!";
    cout << s << endl;
    return 0;
}
