#pragma once

#include <filesystem>
#include <json.hpp>

#include "kernmetric/kernels.hpp"
#include "kernmetric/phi_profile.hpp"
#include "kernmetric/spaces.hpp"

namespace kernmetric {

// Resolution context for kernel-spec JSON: the grid given on the command
// line (if any) and the directory relative grid paths are resolved against.
struct ConfigContext {
  GridPtr grid;
  std::filesystem::path base_dir = ".";
};

// {"family":"gaussian","alpha":0.5} | {"family":"discrete_laplace","atoms":[[rate,w],...]}
// | {"family":"exp_sqrt","c":1} | {"family":"inverse_rational","beta":1,"scale":1}
PhiProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const PhiProfile& phi);

// {"type":"euclidean","dim":d} | {"type":"function","p":2,"grid":...}
// | {"type":"measure","base":{...}}. A grid is {"a":..,"b":..,"m":..}
// (trapezoid), a path to a grid CSV, or omitted to use ctx.grid.
PointSpace space_from_json(const nlohmann::json& j, const ConfigContext& ctx);

// Full kernel spec: {"space":{...},"phi":{...},"rule":{"kind":...,...}}.
// Throws ParseError for structural problems; constructor errors (ClassError,
// DomainError, ...) propagate unchanged.
Kernel kernel_from_json(const nlohmann::json& j, const ConfigContext& ctx);
Kernel load_kernel(const std::filesystem::path& path, const ConfigContext& ctx);

// Gaussian radial kernel with alpha = 1/2 on the space; for measure spaces the
// mean-embedding kernel over that base kernel.
Kernel default_kernel(const PointSpace& space);

}  // namespace kernmetric
