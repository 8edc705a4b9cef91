// Acceptance criteria: one [PASS]/[FAIL] line per criterion.

#include <iostream>

#include "classprime/acceptance.hpp"

int main()
{
    return classprime::acceptance::run_all(std::cout) ? 0 : 1;
}
