#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kcut/rng.hpp"
#include "kcut/tree.hpp"

namespace kcut {

/// Critical offspring law: mean 1, finite positive variance.
struct OffspringDist {
  enum class Kind { poisson1, geometric_half, custom_pmf };
  Kind kind = Kind::poisson1;
  std::vector<double> pmf;  // only for custom_pmf; pmf[j] = P(xi = j)
  double mean = 1.0;
  double variance = 1.0;
  int span = 1;

  static OffspringDist poisson1();
  static OffspringDist geometric_half();
  /// Validates sum 1, mean 1 and positive variance (all within 1e-12).
  static OffspringDist custom(std::vector<double> pmf);
  double sigma() const;
  std::string name() const;
};

struct RegularComponent {
  int d = 2;
  int height = 1;
};

enum class Family { path, complete_binary, complete_regular, mixture, cgw, recursive, preferential, bst };

std::string family_name(Family f);
Family parse_family(const std::string& name);
bool is_deterministic(Family f);

struct FamilySpec {
  Family family = Family::path;
  std::int64_t n = 1;                       // path, complete_binary, cgw, recursive, preferential, bst
  RegularComponent regular;                 // complete_regular
  std::vector<RegularComponent> components; // mixture
  OffspringDist offspring;                  // cgw
  double alpha = 0.0;                       // preferential
};

Tree gen_path(std::int64_t n);
Tree gen_complete_binary(std::int64_t n);
Tree gen_complete_regular(int d, int height);
Tree gen_mixture(const std::vector<RegularComponent>& components);
Tree gen_cgw(std::int64_t n, const OffspringDist& dist, Rng& rng);
Tree gen_recursive(std::int64_t n, Rng& rng);
Tree gen_preferential(std::int64_t n, double alpha, Rng& rng);
Tree gen_bst(std::int64_t n, Rng& rng);

/// Dispatch on spec.family; deterministic families ignore rng.
Tree generate(const FamilySpec& spec, Rng& rng);

/// Vertex count of the tree the spec describes.
std::int64_t family_size(const FamilySpec& spec);

/// Depth profile of a deterministic family computed without building the
/// tree, so sizes beyond the int32 vertex range are allowed.
Profile deterministic_profile(const FamilySpec& spec);

/// Height (floor of lg2) used for complete binary trees of size n.
int binary_height(std::int64_t n);

}  // namespace kcut
