#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nhs {

/// Worst relative error of one discrete identity over a batch of random
/// (field, grid) trials.
struct IdentityCheck {
  std::string name;
  int trials = 0;
  double max_rel_error = 0.0;
  bool pass(double tol) const { return max_rel_error <= tol; }
};

/// Vertical identities on random nonuniform grids (adjacent thickness
/// ratios within [0.2, 5], n drawn from [nmin, nmax]): averaging by parts,
/// integration by parts, commuting identity, both product rules and the
/// SB81 form equivalences at midpoints and interfaces.
std::vector<IdentityCheck> vertical_identity_suite(int trials, std::uint64_t seed, int nmin = 2,
                                                   int nmax = 128);

/// Periodic summation by parts for the spectral-element derivative on
/// random continuous fields, ne drawn from [nemin, nemax].
IdentityCheck horizontal_ibp_check(int trials, std::uint64_t seed, int nemin = 4, int nemax = 64);

}  // namespace nhs
