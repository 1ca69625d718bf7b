#include <herglotz/derive.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace herglotz {

using sym::Expr;
using sym::Kind;

sym::ParseContext VariationalProblem::parse_context() const {
  sym::ParseContext ctx;
  ctx.coords = coords;
  for (const auto& f : fields) ctx.fields.push_back(f.name);
  ctx.action_alias_S = kind == ProblemKind::OdeWithAction;
  return ctx;
}

namespace {

void validate(const VariationalProblem& p) {
  if (p.coords.empty())
    throw Error("elderive.bad_problem", "problem declares no coordinates");
  if (p.fields.empty())
    throw Error("elderive.bad_problem", "problem declares no fields");
  if (p.kind == ProblemKind::OdeWithAction && p.coords.size() != 1)
    throw Error("elderive.bad_problem",
                "ode-with-action problems must have exactly one coordinate");
  for (const auto& f : p.fields) {
    if (std::find(p.coords.begin(), p.coords.end(), f.name) != p.coords.end())
      throw Error("elderive.bad_problem",
                  "'" + f.name + "' is declared both as coordinate and field");
  }
}

bool is_constant_in_state(const Expr& e) {
  return !sym::contains_kind(e, Kind::Field) && !sym::contains_kind(e, Kind::FieldDeriv) &&
         !sym::contains_kind(e, Kind::Coordinate) && !sym::contains_kind(e, Kind::ActionDensity) &&
         !sym::contains_kind(e, Kind::Opaque);
}

}  // namespace

GammaVector extract_gamma(const VariationalProblem& p) {
  validate(p);
  GammaVector g;
  for (size_t mu = 0; mu < p.coords.size(); ++mu) {
    Expr d = sym::diff_wrt(p.lagrangian, sym::action_density(static_cast<int>(mu)));
    if (!is_constant_in_state(d))
      throw Error("elderive.nonconstant_gamma",
                  "dL/ds" + std::to_string(mu) + " = " + sym::to_string(d) +
                      " is not constant; only constant gamma-vectors are supported");
    g.components.push_back(std::move(d));
  }
  return g;
}

sym::Expr el_equation_raw(const VariationalProblem& p, const GammaVector& gamma,
                          const std::string& vary_field) {
  if (sym::max_field_deriv_order(p.lagrangian) > 1)
    throw Error("symexpr.order_overflow",
                "Lagrangian contains field derivatives above first order");
  const Expr& L = p.lagrangian;
  Expr eq = sym::diff_wrt(L, sym::field(vary_field));
  for (size_t mu = 0; mu < p.coords.size(); ++mu) {
    Expr momentum = sym::diff_wrt(L, sym::field_deriv(vary_field, {p.coords[mu]}));
    if (momentum.is_zero()) continue;
    eq = eq - sym::total_derivative(momentum, p.coords[mu]) +
         gamma.components[mu] * momentum;
  }
  return sym::expand(eq);
}

sym::Expr sign_normalize(const sym::Expr& lhs, const std::string& time_coord) {
  if (lhs.is_zero()) return lhs;
  std::vector<Expr> terms =
      lhs.kind() == Kind::Sum ? lhs.children() : std::vector<Expr>{lhs};

  auto time_order = [&time_coord](const Expr& term) {
    int best = 0;
    for (const Expr& leaf : sym::leaf_symbols(term)) {
      if (leaf.kind() != Kind::FieldDeriv) continue;
      int n = static_cast<int>(std::count(leaf.deriv_index().begin(),
                                          leaf.deriv_index().end(), time_coord));
      best = std::max(best, n);
    }
    return best;
  };

  int max_order = 0;
  for (const Expr& t : terms) max_order = std::max(max_order, time_order(t));
  // The stored term order is canonical, so the first term at max time-order
  // is a deterministic choice.
  const Expr* lead = &terms.front();
  for (const Expr& t : terms) {
    if (time_order(t) == max_order) {
      lead = &t;
      break;
    }
  }
  sym::Complexq coef = sym::Complexq::integer(1);
  if (lead->kind() == Kind::Constant) coef = lead->value();
  if (lead->kind() == Kind::Product && lead->children().front().kind() == Kind::Constant)
    coef = lead->children().front().value();
  // Distribute the flip so the equation stays a flat sum of terms.
  return coef.sign_negative() ? sym::expand(-lhs) : lhs;
}

std::vector<FieldEquation> derive_field_equations(const VariationalProblem& p) {
  GammaVector gamma = extract_gamma(p);
  std::vector<FieldEquation> out;
  for (const FieldDecl& f : p.fields) {
    // For a conjugate pair the equation attributed to a field is obtained by
    // varying its partner.
    std::string vary = f.name;
    if (f.conjugate_of) {
      vary = *f.conjugate_of;
    } else {
      for (const FieldDecl& g : p.fields)
        if (g.conjugate_of && *g.conjugate_of == f.name) vary = g.name;
    }
    Expr raw = el_equation_raw(p, gamma, vary);
    if (sym::contains_action_density(raw))
      throw Error("elderive.nonconstant_gamma",
                  "derived equation retains action-density dependence");
    out.push_back({f.name, sign_normalize(raw, p.coords[0])});
  }
  return out;
}

FieldEquation derive_herglotz_ode(const VariationalProblem& p) {
  validate(p);
  if (p.kind != ProblemKind::OdeWithAction)
    throw Error("elderive.bad_problem", "derive_herglotz_ode expects an ode-with-action problem");
  if (p.fields.size() != 1)
    throw Error("elderive.bad_problem", "ode-with-action problems must have exactly one field");
  return derive_field_equations(p)[0];
}

VariationalProblem with_zero_params(const VariationalProblem& p,
                                    const std::vector<std::string>& names) {
  VariationalProblem q = p;
  for (const std::string& n : names)
    q.lagrangian = sym::substitute(q.lagrangian, sym::parameter(n), sym::constant(0));
  return q;
}

std::vector<std::string> gamma_parameter_names(const VariationalProblem& p) {
  // Parameters appearing in some dL/ds^mu component but not in the s-free
  // part of the Lagrangian (those shared with the conservative part must not
  // be zeroed).
  std::set<std::string> in_gamma, in_conservative;
  Expr l0 = p.lagrangian;
  for (size_t mu = 0; mu < p.coords.size(); ++mu) {
    Expr d = sym::diff_wrt(p.lagrangian, sym::action_density(static_cast<int>(mu)));
    for (const Expr& leaf : sym::leaf_symbols(d))
      if (leaf.kind() == Kind::Parameter) in_gamma.insert(leaf.name());
    l0 = sym::substitute(l0, sym::action_density(static_cast<int>(mu)), sym::constant(0));
  }
  for (const Expr& leaf : sym::leaf_symbols(l0))
    if (leaf.kind() == Kind::Parameter) in_conservative.insert(leaf.name());
  std::vector<std::string> out;
  for (const std::string& n : in_gamma)
    if (!in_conservative.count(n)) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------
// JSON interchange

VariationalProblem load_problem(const nlohmann::json& j) {
  static const std::set<std::string> allowed = {"name",       "description", "coords",
                                                "fields",     "lagrangian",  "kind",
                                                "metric"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error("elderive.bad_problem", "unknown key '" + it.key() + "' in problem file");

  VariationalProblem p;
  p.name = j.value("name", std::string("custom"));
  p.description = j.value("description", std::string());
  if (!j.contains("coords") || !j.contains("fields") || !j.contains("lagrangian"))
    throw Error("elderive.bad_problem",
                "problem file requires keys coords, fields, lagrangian");
  p.coords = j.at("coords").get<std::vector<std::string>>();
  for (const auto& f : j.at("fields")) {
    FieldDecl d;
    if (f.is_string()) {
      d.name = f.get<std::string>();
    } else {
      d.name = f.at("name").get<std::string>();
      if (f.contains("conjugate_of")) d.conjugate_of = f.at("conjugate_of").get<std::string>();
    }
    p.fields.push_back(std::move(d));
  }
  std::string kind = j.value("kind", std::string("field-density"));
  if (kind == "ode-with-action")
    p.kind = ProblemKind::OdeWithAction;
  else if (kind == "field-density")
    p.kind = ProblemKind::FieldDensity;
  else
    throw Error("elderive.bad_problem", "unknown problem kind '" + kind + "'");
  p.metric = j.value("metric", std::string());
  p.lagrangian_text = j.at("lagrangian").get<std::string>();
  validate(p);
  p.lagrangian = sym::parse(p.lagrangian_text, p.parse_context());
  return p;
}

nlohmann::json problem_to_json(const VariationalProblem& p) {
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& f : p.fields) {
    nlohmann::json d{{"name", f.name}};
    if (f.conjugate_of) d["conjugate_of"] = *f.conjugate_of;
    fields.push_back(std::move(d));
  }
  return nlohmann::json{
      {"name", p.name},
      {"description", p.description},
      {"coords", p.coords},
      {"fields", fields},
      {"kind", p.kind == ProblemKind::OdeWithAction ? "ode-with-action" : "field-density"},
      {"metric", p.metric},
      {"lagrangian", p.lagrangian_text},
  };
}

nlohmann::json equation_to_json(const FieldEquation& eq) {
  using sym::Expr;
  nlohmann::json terms = nlohmann::json::array();
  std::vector<Expr> list =
      eq.lhs.kind() == Kind::Sum ? eq.lhs.children() : std::vector<Expr>{eq.lhs};
  for (const Expr& t : list) {
    sym::Complexq coef = sym::Complexq::integer(1);
    std::vector<Expr> factors;
    if (t.kind() == Kind::Constant) {
      coef = t.value();
    } else if (t.kind() == Kind::Product) {
      for (const Expr& k : t.children()) {
        if (k.kind() == Kind::Constant)
          coef = coef * k.value();
        else
          factors.push_back(k);
      }
    } else {
      factors.push_back(t);
    }
    nlohmann::json symbols = nlohmann::json::array();
    for (const Expr& f : factors) {
      if (f.kind() == Kind::Power)
        symbols.push_back({{"symbol", sym::to_string(f.base())}, {"power", f.exponent()}});
      else
        symbols.push_back({{"symbol", sym::to_string(f)}, {"power", 1}});
    }
    std::ostringstream re, im;
    re << coef.re;
    im << coef.im;
    terms.push_back({{"coefficient", {{"re", re.str()}, {"im", im.str()}}},
                     {"symbols", symbols}});
  }
  return nlohmann::json{{"field", eq.field},
                        {"equation", sym::to_string(eq.lhs) + " = 0"},
                        {"terms", terms}};
}

}  // namespace herglotz
