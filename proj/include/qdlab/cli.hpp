#pragma once

#include <ostream>

namespace qdlab {

/// Runs the qdlab command line. Exit codes: 0 success, 2 invalid input,
/// 3 quadrature non-convergence, 4 inconclusive certification.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdlab
