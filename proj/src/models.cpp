#include "wpk/models.hpp"

namespace wpk {

namespace {

std::vector<Interval> repeat(Interval b, std::size_t n) { return std::vector<Interval>(n, b); }

}  // namespace

HermitianStructure euclidean_kahler(std::size_t m, Interval bounds) {
  if (m == 0) throw Error("euclidean_kahler needs m >= 1");
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= m; ++k) {
    const std::string suffix = m == 1 ? "" : std::to_string(k);
    names.push_back("x" + suffix);
    names.push_back("y" + suffix);
  }
  const std::size_t n = 2 * m;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < m; ++k) {
    const auto x = static_cast<Eigen::Index>(2 * k);
    J(x + 1, x) = 1.0;
    J(x, x + 1) = -1.0;
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return {Chart(names, repeat(bounds, n)), MetricField::constant(id), EndomorphismField::constant(J)};
}

KenmotsuModel warped_kenmotsu(const HermitianStructure& base, const expr::Expr& h, Interval s_bounds,
                              const std::string& s_name, const Params& params) {
  const Chart chart = base.chart.prepend(s_name, s_bounds);
  const std::size_t n = chart.dim();
  const std::size_t m = base.chart.dim();
  for (const std::string& v : h.free_variables()) {
    if (v != "t" && params.count(v) == 0) throw Error("warp '" + expr::print(h) + "' uses unknown variable '" + v + "'");
  }
  const Chart line({"t"}, {s_bounds});
  const ScalarField h1 = ScalarField::from_expr(line, h, params);
  const ScalarField h_lift(lift(h1.field(), n, 0));
  const ScalarField beta(lift((partial_field(h1, 0) / h1).field(), n, 0));

  const Field gk = base.g.field();
  const Field jk = base.J.field();
  const MetricField g(Field::make(n, n * n, [gk, h_lift, m, n](auto x, auto out) {
    const auto v = gk.eval(x.subspan(1, m));
    const auto hv = h_lift.eval(x);
    const auto h2 = hv * hv;
    for (auto& o : out) o = 0.0;
    out[0] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) out[(1 + i) * n + 1 + j] = h2 * v[i * m + j];
    }
  }));
  const EndomorphismField phi(Field::make(n, n * n, [jk, m, n](auto x, auto out) {
    const auto v = jk.eval(x.subspan(1, m));
    for (auto& o : out) o = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) out[(1 + i) * n + 1 + j] = v[i * m + j];
    }
  }));
  std::vector<double> ds(n, 0.0);
  ds[0] = 1.0;
  return {AlmostContactStructure{chart, phi, VectorField::basis(n, 0), KForm::constant(n, 1, ds), g}, beta};
}

KenmotsuModel kenmotsu_example(double c, Interval bounds) {
  if (!(c > 0.0)) throw Error("kenmotsu_example needs c > 0, got " + format_real(c));
  return warped_kenmotsu(euclidean_kahler(1, bounds), expr::parse("c*exp(t)"), bounds, "s", {{"c", c}});
}

KenmotsuModel kenmotsu_cosh(Interval bounds) {
  return warped_kenmotsu(euclidean_kahler(1, bounds), expr::parse("cosh(t)"), bounds);
}

KenmotsuModel cosymplectic_product(Interval bounds) {
  return warped_kenmotsu(euclidean_kahler(1, bounds), expr::Expr::number(1.0), bounds);
}

AlmostContactStructure sasakian_r3(Interval bounds) {
  const Chart chart({"x", "y", "z"}, repeat(bounds, 3));
  const ScalarField y = ScalarField::coordinate(3, 1);
  const KForm eta = KForm::one_form({-0.5 * y, ScalarField(), ScalarField::constant(3, 0.5)});
  const EndomorphismField phi(Field::make(3, 9, [](auto x, auto out) {
    for (auto& o : out) o = 0.0;
    out[1] = 1.0;   // phi^x_y
    out[3] = -1.0;  // phi^y_x
    out[7] = x[1];  // phi^z_y
  }));
  const MetricField g(Field::make(3, 9, [](auto x, auto out) {
    const auto yv = x[1];
    // eta = (-y/2, 0, 1/2)
    out[0] = 0.25 + 0.25 * yv * yv;
    out[1] = 0.0;
    out[2] = -0.25 * yv;
    out[3] = 0.0;
    out[4] = 0.25;
    out[5] = 0.0;
    out[6] = -0.25 * yv;
    out[7] = 0.0;
    out[8] = 0.25;
  }));
  return {chart, phi, VectorField::constant({0.0, 0.0, 2.0}), eta, g};
}

std::size_t TowerLevel::dim() const {
  if (kahler) return kahler->chart.dim();
  return kenmotsu->acs.chart.dim();
}

std::vector<TowerLevel> tower(std::size_t levels, const std::vector<expr::Expr>& warps, std::size_t check_points,
                              std::uint64_t seed) {
  if (levels < 1) throw Error("tower needs at least one level");
  if (warps.size() < levels) throw Error("tower needs one warp per level");
  const Interval unit{-1.0, 1.0};
  std::vector<TowerLevel> out;
  TowerLevel base;
  base.kahler = euclidean_kahler(1, unit);
  out.push_back(std::move(base));
  for (std::size_t k = 1; k <= levels; ++k) {
    const TowerLevel& prev = out.back();
    const std::string coord = "t" + std::to_string(k);
    TowerLevel level;
    level.level = k;
    if (k % 2 == 1) {
      level.kind = LevelKind::Kenmotsu;
      level.kenmotsu = warped_kenmotsu(*prev.kahler, warps[k - 1], unit, coord);
      const auto pts = sample_points(level.kenmotsu->acs.chart, check_points, seed);
      try {
        level.kappa = calibrate_kappa(level.kenmotsu->acs, level.kenmotsu->beta0, pts).kappa;
      } catch (const CalibrationError&) {
        // beta = 0 leaves kappa undetermined; it then plays no role in the next level.
      }
    } else {
      level.kind = LevelKind::Kahler;
      level.warped = build(prev.kenmotsu->acs, prev.kenmotsu->beta0, warps[k - 1], unit, coord);
      const auto pts = sample_points(level.warped->chart, check_points, seed);
      const double kappa = prev.kappa.value_or(1.0);
      level.conformal = conformal_kahler(*level.warped, kappa, Point{level.warped->chart.center()}, pts);
      if (!level.conformal->exact) {
        throw Error("tower level " + std::to_string(k) + ": beta eta is not exact, no conformal Kahler metric");
      }
      level.kahler = level.conformal->structure;
    }
    out.push_back(std::move(level));
  }
  return out;
}

std::string kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Kahler: return "kahler";
    case ModelKind::Kenmotsu: return "kenmotsu";
    case ModelKind::Sasakian: return "sasakian";
    case ModelKind::Cosymplectic: return "cosymplectic";
    case ModelKind::Tower: return "tower";
  }
  return "unknown";
}

std::string type_name(ParamType t) {
  switch (t) {
    case ParamType::Integer: return "integer";
    case ParamType::Real: return "real";
    case ParamType::Expression: return "expression";
  }
  return "unknown";
}

const std::vector<ModelSpec>& catalog() {
  static const std::vector<ModelSpec> models = [] {
    const ParamSpec lo{"lo", ParamType::Real, "-1", "lower coordinate bound"};
    const ParamSpec hi{"hi", ParamType::Real, "1", "upper coordinate bound"};
    const ParamSpec warp{"warp", ParamType::Expression, "exp(t)", "warp p(t) of the product over the model"};
    const ParamSpec converse_warp{"converse_warp", ParamType::Expression, "1",
                                  "warp used by the converse checks"};
    const ParamSpec f_kenmotsu{"f", ParamType::Expression, "exp(-kappa*u0)",
                               "conformal factor for converse_almost_kenmotsu; u0 is the potential of beta0 eta0"};
    const ParamSpec f_contact{"f", ParamType::Expression, "exp(t)", "conformal factor for converse_contact"};
    std::vector<ModelSpec> m{
        {"cosymplectic_product", ModelKind::Cosymplectic, 3,
         {lo, hi, warp, converse_warp, f_kenmotsu},
         "ds^2 + dx^2 + dy^2 with beta = 0"},
        {"euclidean_kahler", ModelKind::Kahler, 2,
         {{"m", ParamType::Integer, "1", "complex dimension, chart dimension 2m"}, lo, hi},
         "flat R^2m with the standard complex structure"},
        {"kenmotsu_cosh", ModelKind::Kenmotsu, 3,
         {lo, hi, warp, converse_warp, f_kenmotsu},
         "ds^2 + cosh^2 s (dx^2 + dy^2) with beta = tanh s"},
        {"kenmotsu_example", ModelKind::Kenmotsu, 3,
         {{"c", ParamType::Real, "1", "scale of the warp c e^s"}, lo, hi, warp, converse_warp, f_kenmotsu},
         "ds^2 + c^2 e^{2s} (dx^2 + dy^2) with beta = 1"},
        {"sasakian_r3", ModelKind::Sasakian, 3,
         {lo, hi, converse_warp, f_contact},
         "standard contact metric structure on R^3, eta = (dz - y dx)/2"},
        {"tower", ModelKind::Tower, 4,
         {{"levels", ParamType::Integer, "2", "number of levels above R^2, top dimension levels + 2"},
          {"w<k>", ParamType::Expression, "exp(t)", "warp of level k in the variable t"}},
         "alternating Kenmotsu and conformal Kahler levels over R^2"},
    };
    return m;
  }();
  return models;
}

const ModelSpec* find_model(std::string_view name) {
  for (const ModelSpec& m : catalog()) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

}  // namespace wpk
