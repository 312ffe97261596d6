#include "jchain/family.hpp"

#include <cmath>
#include <sstream>

#include "jchain/error.hpp"
#include "jchain/format.hpp"

namespace jchain {

namespace {

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); }

void require_order(const FamilySpec& spec) {
  if (spec.N < 1) reject(std::string(family_name(spec.kind())) + " requires N >= 1");
}

}  // namespace

int FamilySpec::order() const {
  if (is_finite()) return N;
  if (!k_max) reject(std::string(family_name(kind())) + " truncation k_max is unresolved");
  return *k_max;
}

void validate(const FamilySpec& spec) {
  std::ostringstream msg;
  switch (spec.kind()) {
    case FamilyKind::Krawtchouk: {
      require_order(spec);
      const double p = spec.as<KrawtchoukParams>().p;
      if (!(p > 0.0 && p < 1.0)) {
        msg << "krawtchouk requires 0<p<1 (got p=" << p << ")";
        reject(msg.str());
      }
      break;
    }
    case FamilyKind::Hahn: {
      require_order(spec);
      const auto [a, b] = spec.as<HahnParams>();
      // The a,b < -N branch is deliberately unsupported.
      if (!(a > -1.0 && b > -1.0)) {
        msg << "hahn requires alpha>-1 and beta>-1 (got alpha=" << a << ", beta=" << b << ")";
        reject(msg.str());
      }
      break;
    }
    case FamilyKind::DualHahn: {
      require_order(spec);
      const auto [g, d] = spec.as<DualHahnParams>();
      const double n = spec.N;
      if (!((g > -1.0 && d > -1.0) || (g < -n && d < -n))) {
        msg << "dualhahn requires gamma>-1 and delta>-1, or gamma<-N and delta<-N (got gamma=" << g
            << ", delta=" << d << ", N=" << spec.N << ")";
        reject(msg.str());
      }
      break;
    }
    case FamilyKind::Racah: {
      require_order(spec);
      const auto [b, g, d] = spec.as<RacahParams>();
      if (!(g + 1.0 > 0.0 && d + 1.0 > 0.0 && b > g + spec.N)) {
        msg << "racah requires gamma+1>0, delta+1>0 and beta>gamma+N (got beta=" << b
            << ", gamma=" << g << ", delta=" << d << ", N=" << spec.N << ")";
        reject(msg.str());
      }
      break;
    }
    case FamilyKind::Charlier: {
      const double a = spec.as<CharlierParams>().alpha;
      if (!(a > 0.0)) {
        msg << "charlier requires alpha>0 (got alpha=" << a << ")";
        reject(msg.str());
      }
      break;
    }
    case FamilyKind::Meixner: {
      const auto [b, c] = spec.as<MeixnerParams>();
      if (!(b > 0.0 && c > 0.0 && c < 1.0)) {
        msg << "meixner requires b>0 and 0<c<1 (got b=" << b << ", c=" << c << ")";
        reject(msg.str());
      }
      break;
    }
  }
  if (!spec.is_finite() && spec.k_max && *spec.k_max < 1) reject("truncation k_max must be >= 1");
}

std::string_view family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Krawtchouk: return "krawtchouk";
    case FamilyKind::Hahn: return "hahn";
    case FamilyKind::DualHahn: return "dualhahn";
    case FamilyKind::Racah: return "racah";
    case FamilyKind::Charlier: return "charlier";
    case FamilyKind::Meixner: return "meixner";
  }
  return "unknown";
}

std::optional<FamilyKind> parse_family_name(std::string_view name) {
  for (auto k : {FamilyKind::Krawtchouk, FamilyKind::Hahn, FamilyKind::DualHahn, FamilyKind::Racah,
                 FamilyKind::Charlier, FamilyKind::Meixner}) {
    if (family_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string describe_params(const FamilySpec& spec) {
  std::string out;
  auto add = [&](const char* name, double v) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += format_double(v, 12);
  };
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, KrawtchoukParams>) {
          add("p", p.p);
        } else if constexpr (std::is_same_v<P, HahnParams>) {
          add("alpha", p.alpha);
          add("beta", p.beta);
        } else if constexpr (std::is_same_v<P, DualHahnParams>) {
          add("gamma", p.gamma);
          add("delta", p.delta);
        } else if constexpr (std::is_same_v<P, RacahParams>) {
          add("beta", p.beta);
          add("gamma", p.gamma);
          add("delta", p.delta);
        } else if constexpr (std::is_same_v<P, CharlierParams>) {
          add("alpha", p.alpha);
        } else {
          add("b", p.b);
          add("c", p.c);
        }
      },
      spec.params);
  return out;
}

}  // namespace jchain
