#include <herglotz/derive.hpp>

namespace herglotz {

namespace {

VariationalProblem make(std::string name, std::string description,
                        std::vector<std::string> coords, std::vector<FieldDecl> fields,
                        ProblemKind kind, std::string metric, std::string lagrangian) {
  VariationalProblem p;
  p.name = std::move(name);
  p.description = std::move(description);
  p.coords = std::move(coords);
  p.fields = std::move(fields);
  p.kind = kind;
  p.metric = std::move(metric);
  p.lagrangian_text = std::move(lagrangian);
  p.lagrangian = sym::parse(p.lagrangian_text, p.parse_context());
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"oscillator", "string", "schrodinger_1d", "klein_gordon_1p1", "em_1p1", "em_3p1"};
}

VariationalProblem preset(const std::string& name) {
  if (name == "oscillator") {
    return make("oscillator",
                "point particle of mass m in a potential U(x) with a linear-in-action "
                "dissipation term; equation of motion m*x'' + gamma*x' + U'(x) = 0",
                {"t"}, {{"x", {}}}, ProblemKind::OdeWithAction, "",
                "m/2*D(x,t)^2 - U(x) - gamma/m*S");
  }
  if (name == "string") {
    // Elastic term carries T/2 so the derived wave equation has tension
    // coefficient T.
    return make("string",
                "transverse displacement of a string (mass density mu, tension T) with "
                "viscous damping gamma",
                {"t", "x"}, {{"phi", {}}}, ProblemKind::FieldDensity, "",
                "mu/2*D(phi,t)^2 - T/2*D(phi,x)^2 - gamma/mu*s0");
  }
  if (name == "schrodinger_1d") {
    return make("schrodinger_1d",
                "non-conservative Schrodinger pair (psi, psis) in one space dimension; "
                "gamma0 damps the norm, gamma1 couples to the probability current",
                {"t", "x"}, {{"psi", {}}, {"psis", std::string("psi")}},
                ProblemKind::FieldDensity, "",
                "-hbar^2/(2*m)*D(psis,x)*D(psi,x) - V(x)*psis*psi"
                " + i*hbar/2*(psis*D(psi,t) - psi*D(psis,t)) - gamma0*s0 - gamma1*s1");
  }
  if (name == "klein_gordon_1p1") {
    // Metric factors pre-expanded into (t, x) components; the mass term
    // enters as m^2*phi in the equation of motion (telegraph form when
    // gamma1 = 0).
    return make("klein_gordon_1p1",
                "damped Klein-Gordon / telegraph scalar field in one space dimension",
                {"t", "x"}, {{"phi", {}}}, ProblemKind::FieldDensity, "+-",
                "1/(2*c^2)*D(phi,t)^2 - 1/2*D(phi,x)^2 - m^2/2*phi^2"
                " - c*gamma0*s0 - gamma1*s1");
  }
  if (name == "em_1p1") {
    // Transverse potential component of a z-propagating source-free wave,
    // in x0 = ct units.
    return make("em_1p1",
                "source-free transverse electromagnetic potential component for "
                "z-propagating waves (x0 in ct units)",
                {"x0", "z"}, {{"A1", {}}}, ProblemKind::FieldDensity, "+-",
                "1/2*D(A1,x0)^2 - 1/2*D(A1,z)^2 - gamma0*s0 - gamma1*s1");
  }
  if (name == "em_3p1") {
    // F_{mu nu} = d_mu A_nu - d_nu A_mu expanded against metric
    // diag(1,-1,-1,-1); x0 in ct units; J0..J3 are the contravariant source
    // components.
    return make(
        "em_3p1",
        "electromagnetic four-potential A0..A3 with sources J0..J3 and a constant "
        "damping four-vector gamma0..gamma3, metric (+,-,-,-) expanded into components",
        {"x0", "x1", "x2", "x3"}, {{"A0", {}}, {"A1", {}}, {"A2", {}}, {"A3", {}}},
        ProblemKind::FieldDensity, "+---",
        "1/2*((D(A1,x0)-D(A0,x1))^2 + (D(A2,x0)-D(A0,x2))^2 + (D(A3,x0)-D(A0,x3))^2)"
        " - 1/2*((D(A2,x1)-D(A1,x2))^2 + (D(A3,x1)-D(A1,x3))^2 + (D(A3,x2)-D(A2,x3))^2)"
        " - 4*pi/c*(A0*J0 + A1*J1 + A2*J2 + A3*J3)"
        " - gamma0*s0 - gamma1*s1 - gamma2*s2 - gamma3*s3");
  }
  throw Error("elderive.unknown_preset", "unknown preset '" + name + "'");
}

}  // namespace herglotz
