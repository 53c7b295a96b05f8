#ifndef MVP_SYMKERNEL_CATALOG_HPP
#define MVP_SYMKERNEL_CATALOG_HPP

#include "mvp/symkernel/expr.hpp"
#include "mvp/symkernel/field_op.hpp"

#include <string>
#include <vector>

namespace mvp::sym {

struct NamedWeight {
  std::string name;
  Expr value;
};

/// Weights annihilated by free transport.
class WeightCatalog {
 public:
  static const WeightCatalog& instance();

  /// k0: v^0/v^0, v^1/v^0, v^2/v^0, v^3/v^0, s, z12, z13, z23, z01, z02, z03.
  const std::vector<NamedWeight>& k0() const { return k0_; }
  /// k0 without the z0k.
  const std::vector<NamedWeight>& k() const { return k_; }
  /// Sum of squares over k0.
  const Expr& z_squared() const { return z2_; }
  /// -(t^2 + r^2) + 2 t (x.v)/|v|
  const Expr& morawetz() const { return morawetz_; }

  const Expr& weight(const std::string& name) const;

 private:
  WeightCatalog();
  std::vector<NamedWeight> k0_;
  std::vector<NamedWeight> k_;
  Expr z2_;
  Expr morawetz_;
};

enum class IdentityStatus { proved, failed };

struct IdentityResult {
  std::string id;
  std::string group;
  std::string statement;
  IdentityStatus status = IdentityStatus::failed;
  std::vector<std::string> residual_terms;
};

struct CertificateReport {
  std::vector<IdentityResult> entries;

  std::size_t proved() const;
  std::size_t failed() const;
  bool all_proved() const { return failed() == 0; }

  std::string to_table() const;
  std::string to_json() const;
};

/// Runs every algebraic identity in a fixed order.
CertificateReport verify_identity_catalog();

}  // namespace mvp::sym

#endif
