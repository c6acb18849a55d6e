#include <iostream>
using namespace std;

int main() {
    int a = 17;
    int b = 5;
    cout << a + b << " " << a - b << " " << a * b << endl;
    cout << a / b << " " << a % b << " " << -a / b << " " << -a % b << endl;
    double x = 7.5;
    double y = a;
    cout << x / 2 << " " << y / 4 << " " << x * y << endl;
    cout << 1.0 / 3 << " " << 100000.0 * 100 << " " << 0.0001 << " " << 0.00001 << endl;
    bool t = a > b;
    cout << t << " " << (a == b) << " " << !t << endl;
    char c = 'A';
    cout << c << " " << c + 1 << endl;
    return 0;
}
