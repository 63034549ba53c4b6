#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpk/warp.hpp"

namespace wpk {

struct KenmotsuModel {
  AlmostContactStructure acs;
  ScalarField beta0;
};

using Params = std::map<std::string, double, std::less<>>;

// R^{2m}, flat metric, J d_x = d_y blockwise. Coordinates x, y (m = 1) or x1, y1, x2, ...
HermitianStructure euclidean_kahler(std::size_t m, Interval bounds = {-1.0, 1.0});

// I x_h K with g = ds^2 + h(s)^2 g_K, eta = ds, xi = d_s, phi = J_K and
// beta = h'/h. The warp expression is written in `t`, bound to `s_name`.
KenmotsuModel warped_kenmotsu(const HermitianStructure& base, const expr::Expr& h, Interval s_bounds,
                              const std::string& s_name = "s", const Params& params = {});

// ds^2 + c^2 e^{2s}(dx^2 + dy^2), beta = 1.
KenmotsuModel kenmotsu_example(double c, Interval bounds = {-1.0, 1.0});
// ds^2 + cosh^2 s (dx^2 + dy^2), beta = tanh s.
KenmotsuModel kenmotsu_cosh(Interval bounds = {-1.0, 1.0});
// ds^2 + dx^2 + dy^2, beta = 0.
KenmotsuModel cosymplectic_product(Interval bounds = {-1.0, 1.0});

// eta = (dz - y dx) / 2, xi = 2 d_z, g = eta (x) eta + (dx^2 + dy^2) / 4.
AlmostContactStructure sasakian_r3(Interval bounds = {-1.0, 1.0});

enum class LevelKind { Kahler, Kenmotsu };

struct TowerLevel {
  std::size_t level = 0;
  LevelKind kind = LevelKind::Kahler;
  std::optional<HermitianStructure> kahler;
  std::optional<KenmotsuModel> kenmotsu;
  std::optional<WarpedProduct> warped;  // even levels above 0: the product before rescaling
  std::optional<ConformalKahler> conformal;
  std::optional<double> kappa;  // calibrated on Kenmotsu levels

  std::size_t dim() const;
};

// Level 0 is euclidean_kahler(1). Odd levels warp the previous Kahler level
// along a new coordinate t<k>; even levels rescale the warped product of the
// previous Kenmotsu level to a Kahler metric. warps[k-1] is the warp of level
// k in the variable t. `check_points` sample the closedness pre-check.
std::vector<TowerLevel> tower(std::size_t levels, const std::vector<expr::Expr>& warps,
                              std::size_t check_points = 32, std::uint64_t seed = 42);

enum class ModelKind { Kahler, Kenmotsu, Sasakian, Cosymplectic, Tower };
std::string kind_name(ModelKind k);

enum class ParamType { Integer, Real, Expression };
std::string type_name(ParamType t);

struct ParamSpec {
  std::string name;  // "w<k>" stands for w1, w2, ... up to the level count
  ParamType type;
  std::string default_value;
  std::string description;
};

struct ModelSpec {
  std::string name;
  ModelKind kind;
  std::size_t dim;  // at default parameters
  std::vector<ParamSpec> params;
  std::string description;
};

// Sorted by name.
const std::vector<ModelSpec>& catalog();
const ModelSpec* find_model(std::string_view name);

}  // namespace wpk
