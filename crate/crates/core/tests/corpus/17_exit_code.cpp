#include <iostream>
using namespace std;

int main() {
    int code = 6 * 7;
    cout << "exiting with " << code << endl;
    return code;
}
