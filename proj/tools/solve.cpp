#include "qmspec/report.hpp"

int main(int argc, char** argv) { return qmspec::run_cli(argc, argv); }
