#include "mvp/symkernel/catalog.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mvp::sym {

namespace {

Denominator over_w(int k = 1) {
  Denominator d;
  d.w = static_cast<std::uint16_t>(k);
  return d;
}

Denominator over_u(int k = 1) {
  Denominator d;
  d.u = static_cast<std::uint16_t>(k);
  return d;
}

Expr x_dot_v() {
  Expr r;
  for (int i = 1; i <= 3; ++i) r += Expr::x(i) * Expr::v(i);
  return r;
}

std::vector<std::string> residual_of(const Expr& e) {
  if (e.is_zero()) return {};
  return {e.to_string()};
}

std::vector<std::string> residual_of(const FieldOp& op) {
  std::vector<std::string> out;
  for (int k = 0; k < kNumVars; ++k) {
    const Expr& c = op.coefficients()[k];
    if (!c.is_zero()) out.push_back("d_" + std::string(var_name(static_cast<Var>(k))) + ": " + c.to_string());
  }
  return out;
}

IdentityResult zero_expr(std::string id, std::string group, std::string statement, const Expr& residual) {
  IdentityResult r;
  r.id = std::move(id);
  r.group = std::move(group);
  r.statement = std::move(statement);
  r.status = residual.is_zero() ? IdentityStatus::proved : IdentityStatus::failed;
  r.residual_terms = residual_of(residual);
  return r;
}

IdentityResult zero_op(std::string id, std::string group, std::string statement, const FieldOp& residual) {
  IdentityResult r;
  r.id = std::move(id);
  r.group = std::move(group);
  r.statement = std::move(statement);
  r.status = residual.is_zero() ? IdentityStatus::proved : IdentityStatus::failed;
  r.residual_terms = residual_of(residual);
  return r;
}

}  // namespace

WeightCatalog::WeightCatalog() {
  k0_.push_back({"v0/v0", Expr(1)});
  for (int i = 1; i <= 3; ++i) k0_.push_back({"v" + std::to_string(i) + "/v0", Expr::v(i).divided_by(over_w())});
  k0_.push_back({"s", Expr::t() - x_dot_v().divided_by(over_w())});
  const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
  for (const auto& p : pairs) {
    const int i = p[0], j = p[1];
    Expr z = (Expr::x(i) * Expr::v(j) - Expr::x(j) * Expr::v(i)).divided_by(over_w());
    k0_.push_back({"z" + std::to_string(i) + std::to_string(j), std::move(z)});
  }
  for (int k = 1; k <= 3; ++k)
    k0_.push_back({"z0" + std::to_string(k), Expr::x(k) - (Expr::t() * Expr::v(k)).divided_by(over_w())});

  for (const auto& nw : k0_)
    if (nw.name.rfind("z0", 0) != 0) k_.push_back(nw);

  for (const auto& nw : k0_) z2_ += nw.value * nw.value;

  Expr r2;
  for (int i = 1; i <= 3; ++i) r2 += Expr::x(i) * Expr::x(i);
  morawetz_ = -(Expr::t() * Expr::t() + r2) + Expr(2) * Expr::t() * x_dot_v().divided_by(over_w());
}

const WeightCatalog& WeightCatalog::instance() {
  static const WeightCatalog catalog;
  return catalog;
}

const Expr& WeightCatalog::weight(const std::string& name) const {
  for (const auto& nw : k0_)
    if (nw.name == name) return nw.value;
  if (name == "z2") return z2_;
  if (name == "m") return morawetz_;
  throw std::invalid_argument("unknown weight: " + name);
}

std::size_t CertificateReport::proved() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.status == IdentityStatus::proved;
  return n;
}

std::size_t CertificateReport::failed() const { return entries.size() - proved(); }

std::string CertificateReport::to_table() const {
  std::ostringstream os;
  std::string group;
  for (const auto& e : entries) {
    if (e.group != group) {
      group = e.group;
      os << "== " << group << "\n";
    }
    os << "  " << std::left << std::setw(30) << e.id << std::setw(8)
       << (e.status == IdentityStatus::proved ? "PROVED" : "FAILED") << e.statement << "\n";
    for (const auto& t : e.residual_terms) os << "      residual " << t << "\n";
  }
  os << proved() << "/" << entries.size() << " identities proved\n";
  return os.str();
}

std::string CertificateReport::to_json() const {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["proved"] = proved();
  doc["failed"] = failed();
  auto& list = doc["identities"] = nlohmann::json::array();
  for (const auto& e : entries) {
    list.push_back({{"identity_id", e.id},
                    {"group", e.group},
                    {"statement", e.statement},
                    {"status", e.status == IdentityStatus::proved ? "PROVED" : "FAILED"},
                    {"residual_terms", e.residual_terms}});
  }
  return doc.dump(2);
}

CertificateReport verify_identity_catalog() {
  const auto& cat = WeightCatalog::instance();
  const FieldOp T = fields::transport();
  const Expr v0 = Expr::speed();
  CertificateReport report;

  for (const auto& nw : cat.k0())
    report.entries.push_back(zero_expr("T(" + nw.name + ")", "weight preservation", "T(" + nw.name + ") = 0", T.apply(nw.value)));
  report.entries.push_back(zero_expr("T(m)", "weight preservation", "T(m) = 0", T.apply(cat.morawetz())));

  for (const auto& [zname, Z] : fields::commutation_set()) {
    for (const auto& nw : cat.k0()) {
      const Expr image = Z.apply(v0 * nw.value);
      IdentityResult r;
      r.id = zname + "(v0*" + nw.name + ")";
      r.group = "membership";
      if (image.is_zero()) {
        r.status = IdentityStatus::proved;
        r.statement = "= 0";
      } else {
        for (const auto& cand : cat.k0()) {
          const Expr scaled = v0 * cand.value;
          if (equals(image, scaled)) {
            r.statement = "= v0*" + cand.name;
          } else if (equals(image, -scaled)) {
            r.statement = "= -v0*" + cand.name;
          } else {
            continue;
          }
          r.status = IdentityStatus::proved;
          break;
        }
        if (r.status == IdentityStatus::failed) {
          r.statement = "not in +-v0*k0";
          r.residual_terms = residual_of(image);
        }
      }
      report.entries.push_back(std::move(r));
    }
  }

  for (const auto& [zname, Z] : fields::commutation_set()) {
    FieldOp expected;
    if (zname == "S") expected = T;
    if (zname == "S_v") expected = -T;
    const std::string rhs = zname == "S" ? "T" : zname == "S_v" ? "-T" : "0";
    report.entries.push_back(
        zero_op("[T," + zname + "]", "commutators", "[T," + zname + "] = " + rhs, commutator(T, Z) - expected));
  }

  const auto d = [](int i) { return FieldOp::partial(position_var(i)); };
  const auto dt = FieldOp::partial(Var::t);
  const FieldOp y12 = Expr::v(1) * d(2) - Expr::v(2) * d(1);
  const Expr v0z12 = Expr::x(1) * Expr::v(2) - Expr::x(2) * Expr::v(1);
  const FieldOp null1 =
      Expr::x(3) * y12 + Expr::v(1) * fields::rotation(2, 3) - Expr::v(2) * fields::rotation(1, 3) + v0z12 * d(3);
  const FieldOp null2 = Expr::x(1) * y12 - Expr::v(1) * fields::rotation(1, 2) + v0z12 * d(1);
  const FieldOp null3 = Expr::x(2) * y12 - Expr::v(2) * fields::rotation(1, 2) + v0z12 * d(2);
  report.entries.push_back(zero_op("null_x3", "null structure",
                                   "x3 (v1 d2 - v2 d1) + v1 O23 - v2 O13 + v0 z12 d3 = 0", null1));
  report.entries.push_back(zero_op("null_x1", "null structure", "x1 (v1 d2 - v2 d1) - v1 O12 + v0 z12 d1 = 0", null2));
  report.entries.push_back(zero_op("null_x2", "null structure", "x2 (v1 d2 - v2 d1) - v2 O12 + v0 z12 d2 = 0", null3));

  const Expr t = Expr::t();
  const Expr r = Expr::radius();
  const Expr r2 = r * r;
  const Expr s = cat.weight("s");
  const Expr vr = x_dot_v().divided_by(over_u());
  const FieldOp S = fields::scaling();
  const FieldOp dr = fields::radial();
  FieldOp vi_di;
  for (int i = 1; i <= 3; ++i) vi_di = vi_di + Expr::v(i) * d(i);
  const FieldOp tau1 = (v0 * (t * t - r2)) * dt - (v0 * t * s) * dt - (r * vr) * S + r2 * T - r2 * (vi_di - vr * dr);
  report.entries.push_back(zero_op("tau_minus_dt", "tau_minus",
                                   "v0 (t^2 - r^2) d_t - v0 t s d_t - r v^r S + r^2 T - r^2 (v^i d_i - v^r d_r) = 0",
                                   tau1));
  const Expr vr_over_v0 = vr.divided_by(over_w());
  const FieldOp tau2 = (t - r) * dr - s * dr - (vr_over_v0 - Expr(1)) * S - s * dt - ((r - t) * vr_over_v0) * dt;
  report.entries.push_back(zero_op("tau_minus_dr", "tau_minus",
                                   "(t - r) d_r - s d_r - (v^r/v0 - 1) S - s d_t - (r - t)(v^r/v0) d_t = 0", tau2));
  return report;
}

}  // namespace mvp::sym
