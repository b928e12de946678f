#pragma once

#include <iosfwd>

namespace dnf {

/// Quick oracle/property suite behind the `validate` subcommand: nonlocal
/// operator FFT-vs-direct equivalence, the a priori bound and Lipschitz
/// property, scheme order checks, and scalar-vs-SIMD kernel equivalence.
/// Prints one PASS/FAIL line per check; returns true when everything passed.
bool run_validation_suite(std::ostream& out);

}  // namespace dnf
