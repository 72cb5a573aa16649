#pragma once

#include <ostream>

// Runs the closed-form examples of every module; returns the number of failures.
int run_selftest(std::ostream& out);
