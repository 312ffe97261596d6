#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace jchain {

enum class FamilyKind { Krawtchouk, Hahn, DualHahn, Racah, Charlier, Meixner };

struct KrawtchoukParams {
  double p;
};
struct HahnParams {
  double alpha, beta;
};
struct DualHahnParams {
  double gamma, delta;
};
/// Racah with alpha fixed to -N-1.
struct RacahParams {
  double beta, gamma, delta;
};
struct CharlierParams {
  double alpha;
};
struct MeixnerParams {
  double b, c;
};

using FamilyParams = std::variant<KrawtchoukParams, HahnParams, DualHahnParams, RacahParams,
                                  CharlierParams, MeixnerParams>;

/// Parameter record for one polynomial family.
///
/// Finite families live on {0..N}. Charlier and Meixner are infinite; their chains are
/// truncated to {0..k_max}. An unset k_max is resolved by `resolve_truncation` in polyfam.
struct FamilySpec {
  FamilyParams params;
  int N = 0;
  std::optional<int> k_max;

  static FamilySpec krawtchouk(int N, double p) { return {KrawtchoukParams{p}, N, {}}; }
  static FamilySpec hahn(int N, double alpha, double beta) { return {HahnParams{alpha, beta}, N, {}}; }
  static FamilySpec dual_hahn(int N, double gamma, double delta) {
    return {DualHahnParams{gamma, delta}, N, {}};
  }
  static FamilySpec racah(int N, double beta, double gamma, double delta) {
    return {RacahParams{beta, gamma, delta}, N, {}};
  }
  static FamilySpec charlier(double alpha, std::optional<int> k_max = {}) {
    return {CharlierParams{alpha}, 0, k_max};
  }
  static FamilySpec meixner(double b, double c, std::optional<int> k_max = {}) {
    return {MeixnerParams{b, c}, 0, k_max};
  }

  FamilyKind kind() const { return static_cast<FamilyKind>(params.index()); }
  bool is_finite() const { return kind() != FamilyKind::Charlier && kind() != FamilyKind::Meixner; }

  /// Highest site index: N for finite families, k_max for truncated infinite ones.
  /// Throws InvalidSpec for an infinite family whose truncation is unresolved.
  int order() const;

  template <class P>
  const P& as() const {
    return std::get<P>(params);
  }
};

/// Throws Error{InvalidSpec} naming the violated parameter constraint.
void validate(const FamilySpec& spec);

std::string_view family_name(FamilyKind kind);
std::optional<FamilyKind> parse_family_name(std::string_view name);

/// Compact "name=value;..." description used in CSV output.
std::string describe_params(const FamilySpec& spec);

}  // namespace jchain
