#pragma once

#include <herglotz/expr.hpp>

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

// Generalized Euler-Lagrange engine: given a variational problem whose
// Lagrangian may depend linearly on the action-density components s^mu, it
// extracts the constant gamma-vector gamma_mu = dL/ds^mu and produces one
// equation of motion per field:
//
//   dL/dphi - d/dx^mu( dL/d(d_mu phi) ) + gamma_mu dL/d(d_mu phi) = 0
//
// With no s-dependence this is the classical Euler-Lagrange operator.
namespace herglotz {

enum class ProblemKind { OdeWithAction, FieldDensity };

struct FieldDecl {
  std::string name;
  std::optional<std::string> conjugate_of;
};

struct VariationalProblem {
  std::string name;  // preset name, or "custom"
  std::string description;
  std::vector<std::string> coords;  // coords[0] plays the role of time
  std::vector<FieldDecl> fields;
  sym::Expr lagrangian;
  ProblemKind kind = ProblemKind::FieldDensity;
  std::string metric;  // preset metadata tag, informational only
  std::string lagrangian_text;

  sym::ParseContext parse_context() const;
};

struct GammaVector {
  std::vector<sym::Expr> components;  // one constant Expr per coordinate
};

// Equation lhs = 0, expanded and sign-normalized: the first highest-order
// time-derivative term carries a positive leading constant.
struct FieldEquation {
  std::string field;
  sym::Expr lhs;
};

GammaVector extract_gamma(const VariationalProblem& p);

std::vector<FieldEquation> derive_field_equations(const VariationalProblem& p);

// 1-D ode-with-action problems (single field of a single coordinate).
FieldEquation derive_herglotz_ode(const VariationalProblem& p);

// Raw (not sign-normalized) Euler-Lagrange expression for one field under a
// given gamma-vector. Exposed so additivity in the Lagrangian can be checked
// before sign normalization breaks it.
sym::Expr el_equation_raw(const VariationalProblem& p, const GammaVector& gamma,
                          const std::string& vary_field);

sym::Expr sign_normalize(const sym::Expr& lhs, const std::string& time_coord);

// Substitutes 0 for every named parameter in `names` (used to zero the
// damping parameters of a preset).
VariationalProblem with_zero_params(const VariationalProblem& p,
                                    const std::vector<std::string>& names);

// Parameter names whose zeroing removes all action-density coupling.
std::vector<std::string> gamma_parameter_names(const VariationalProblem& p);

VariationalProblem preset(const std::string& name);
std::vector<std::string> preset_names();

VariationalProblem load_problem(const nlohmann::json& j);
nlohmann::json problem_to_json(const VariationalProblem& p);
nlohmann::json equation_to_json(const FieldEquation& eq);

}  // namespace herglotz
