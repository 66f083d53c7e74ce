#include "entlaser/params.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "entlaser/errors.hpp"

namespace entlaser {

namespace {

template <typename P>
auto* field_ptr(P& p, std::string_view name) {
  if (name == "g1") return &p.g1;
  if (name == "g2") return &p.g2;
  if (name == "omega3_mag") return &p.omega3_mag;
  if (name == "omega4_mag") return &p.omega4_mag;
  if (name == "phi3") return &p.phi3;
  if (name == "phi4") return &p.phi4;
  if (name == "delta_a") return &p.delta_a;
  if (name == "delta_b") return &p.delta_b;
  if (name == "gamma1") return &p.gamma1;
  if (name == "gamma2") return &p.gamma2;
  if (name == "gamma3") return &p.gamma3;
  if (name == "gamma4") return &p.gamma4;
  if (name == "kappa1") return &p.kappa1;
  if (name == "kappa2") return &p.kappa2;
  throw InvalidParameter(std::string(name), "not a PhysicalParams field");
}

}  // namespace

double& param_ref(PhysicalParams& p, std::string_view name) { return *field_ptr(p, name); }

double param_value(const PhysicalParams& p, std::string_view name) { return *field_ptr(p, name); }

void validate(const PhysicalParams& p) {
  for (auto name : kParamNames) {
    if (!std::isfinite(param_value(p, name))) {
      throw InvalidParameter(std::string(name), "must be finite");
    }
  }
  constexpr std::string_view non_negative[] = {"g1",     "g2",     "omega3_mag", "omega4_mag",
                                               "gamma1", "gamma2", "gamma3",     "gamma4",
                                               "kappa1", "kappa2"};
  for (auto name : non_negative) {
    if (param_value(p, name) < 0.0) {
      throw InvalidParameter(std::string(name), "must be >= 0");
    }
  }
}

PhysicalParams mirrored(const PhysicalParams& p) {
  PhysicalParams m = p;
  std::swap(m.g1, m.g2);
  std::swap(m.omega3_mag, m.omega4_mag);
  std::swap(m.phi3, m.phi4);
  std::swap(m.delta_a, m.delta_b);
  std::swap(m.gamma1, m.gamma3);
  std::swap(m.gamma2, m.gamma4);
  std::swap(m.kappa1, m.kappa2);
  return m;
}

}  // namespace entlaser
