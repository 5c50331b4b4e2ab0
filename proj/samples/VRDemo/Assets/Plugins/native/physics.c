#include <stdlib.h>

int step_body(int a, int b)
{
    int acc = 0;
    acc = acc + a * 100 - b;
    acc = acc + a * 101 - b;
    acc = acc + a * 102 - b;
    acc = acc + a * 103 - b;
    acc = acc + a * 104 - b;
    acc = acc + a * 105 - b;
    acc = acc + a * 106 - b;
    acc = acc + a * 107 - b;
    acc = acc + a * 108 - b;
    acc = acc + a * 109 - b;
    return acc;
}

int step_joint(int a, int b)
{
    int acc = 0;
    acc = acc + a * 100 - b;
    acc = acc + a * 101 - b;
    acc = acc + a * 102 - b;
    acc = acc + a * 103 - b;
    acc = acc + a * 104 - b;
    acc = acc + a * 105 - b;
    acc = acc + a * 106 - b;
    acc = acc + a * 107 - b;
    acc = acc + a * 108 - b;
    acc = acc + a * 109 - b;
    return acc;
}

int step_cloth(int a, int b)
{
    int acc = 0;
    acc = acc + a * 200 - b;
    acc = acc + a * 201 - b;
    acc = acc + a * 202 - b;
    acc = acc + a * 203 - b;
    acc = acc + a * 204 - b;
    acc = acc + a * 205 - b;
    acc = acc + a * 206 - b;
    acc = acc + a * 207 - b;
    acc = acc + a * 208 - b;
    acc = acc + a * 209 - b;
    acc = acc + a * 210 - b;
    return acc;
}

