#include "jchain/jacobi_chain.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "jchain/error.hpp"

namespace jchain {

using nlohmann::json;

std::vector<double> JacobiChain::dense() const {
  const std::size_t n = size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) m[k * n + k] = h[k];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    m[k * n + k + 1] = offdiag(k);
    m[(k + 1) * n + k] = offdiag(k);
  }
  return m;
}

JacobiChain flip_sign(const JacobiChain& chain) {
  JacobiChain out = chain;
  out.sign = chain.sign == SignConvention::MinusJ ? SignConvention::PlusJ : SignConvention::MinusJ;
  out.family.reset();
  return out;
}

JacobiChain affine_transform(const JacobiChain& chain, double lambda, double mu) {
  if (lambda == 0.0) throw Error(ErrorKind::ZeroScale, "affine transform needs lambda != 0");
  JacobiChain out = chain;
  for (auto& v : out.h) v = lambda * v + mu;
  for (auto& v : out.J) v = std::fabs(lambda) * v;
  if (lambda < 0.0) {
    out.sign = chain.sign == SignConvention::MinusJ ? SignConvention::PlusJ : SignConvention::MinusJ;
  }
  if (lambda != 1.0 || mu != 0.0) out.family.reset();
  return out;
}

bool is_mirror_periodic(const JacobiChain& chain, double tol) {
  const std::size_t n = chain.h.size();
  double scale = 0.0;
  for (double v : chain.h) scale = std::max(scale, std::fabs(v));
  for (double v : chain.J) scale = std::max(scale, std::fabs(v));
  double dev = 0.0;
  for (std::size_t k = 0; k < n; ++k) dev = std::max(dev, std::fabs(chain.h[k] - chain.h[n - 1 - k]));
  const std::size_t m = chain.J.size();
  for (std::size_t k = 0; k < m; ++k) dev = std::max(dev, std::fabs(chain.J[k] - chain.J[m - 1 - k]));
  return dev <= tol * scale;
}

namespace {

json params_json(const FamilySpec& spec) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, KrawtchoukParams>) return {{"p", p.p}};
        else if constexpr (std::is_same_v<P, HahnParams>) return {{"alpha", p.alpha}, {"beta", p.beta}};
        else if constexpr (std::is_same_v<P, DualHahnParams>) return {{"gamma", p.gamma}, {"delta", p.delta}};
        else if constexpr (std::is_same_v<P, RacahParams>)
          return {{"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta}};
        else if constexpr (std::is_same_v<P, CharlierParams>) return {{"alpha", p.alpha}};
        else return {{"b", p.b}, {"c", p.c}};
      },
      spec.params);
}

FamilySpec spec_from_json(FamilyKind kind, int n, const json& p) {
  switch (kind) {
    case FamilyKind::Krawtchouk: return FamilySpec::krawtchouk(n, p.at("p").get<double>());
    case FamilyKind::Hahn: return FamilySpec::hahn(n, p.at("alpha").get<double>(), p.at("beta").get<double>());
    case FamilyKind::DualHahn:
      return FamilySpec::dual_hahn(n, p.at("gamma").get<double>(), p.at("delta").get<double>());
    case FamilyKind::Racah:
      return FamilySpec::racah(n, p.at("beta").get<double>(), p.at("gamma").get<double>(),
                               p.at("delta").get<double>());
    case FamilyKind::Charlier: return FamilySpec::charlier(p.at("alpha").get<double>(), n);
    case FamilyKind::Meixner: return FamilySpec::meixner(p.at("b").get<double>(), p.at("c").get<double>(), n);
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family");
}

}  // namespace

std::string chain_to_json(const JacobiChain& chain, int indent) {
  json j;
  if (chain.family) {
    j["kind"] = std::string(family_name(chain.family->kind()));
    j["params"] = params_json(*chain.family);
  } else {
    j["kind"] = "custom";
    j["params"] = json::object();
  }
  j["N"] = static_cast<int>(chain.size()) - 1;
  j["h"] = chain.h;
  j["J"] = chain.J;
  j["sign"] = chain.sign == SignConvention::MinusJ ? "minus" : "plus";
  return j.dump(indent);
}

JacobiChain chain_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidSpec, std::string("chain JSON: ") + e.what());
  }
  try {
    JacobiChain c;
    c.h = j.at("h").get<std::vector<double>>();
    c.J = j.at("J").get<std::vector<double>>();
    const auto sign = j.at("sign").get<std::string>();
    if (sign != "minus" && sign != "plus") throw Error(ErrorKind::InvalidSpec, "sign must be minus or plus");
    c.sign = sign == "minus" ? SignConvention::MinusJ : SignConvention::PlusJ;
    if (c.h.empty() || c.J.size() + 1 != c.h.size())
      throw Error(ErrorKind::InvalidSpec, "chain JSON needs len(J) == len(h) - 1 >= 0");
    const int n = j.at("N").get<int>();
    if (n + 1 != static_cast<int>(c.h.size())) throw Error(ErrorKind::InvalidSpec, "N disagrees with len(h)");
    const auto kind_name = j.at("kind").get<std::string>();
    if (auto kind = parse_family_name(kind_name)) c.family = spec_from_json(*kind, n, j.at("params"));
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidSpec, std::string("chain JSON: ") + e.what());
  }
}

}  // namespace jchain
