#include "sunit/apps.hpp"

int main(int argc, char** argv) { return sunit::cli_main(argc, argv); }
