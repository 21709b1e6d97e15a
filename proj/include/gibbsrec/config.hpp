#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "gibbsrec/experiment.hpp"
#include "gibbsrec/ifs.hpp"
#include "gibbsrec/rate.hpp"
#include "gibbsrec/thermo.hpp"

namespace gibbsrec {

using Json = nlohmann::ordered_json;

// Parsed run description.  raw preserves the document order of the file, so
// reports that embed it reproduce the input faithfully; every relative path
// inside resolves against dir.
struct RunConfig {
  Json raw;
  std::filesystem::path dir;
  std::uint64_t seed = 0;
};

RunConfig load_config(const std::filesystem::path& file);

// Model section: exactly one of "bernoulli" or "sft".
GibbsModel config_model(const RunConfig& cfg);

// Rate section.  Closed-form kinds take (h, rho) from the model, so model
// must be non-null for them; tables may come inline or from a file of one
// value per line.
RateFunction config_rate(const RunConfig& cfg, const GibbsModel* model);

// IFS section, certified on construction.
IfsSpec config_ifs(const RunConfig& cfg);

std::vector<CountWindow> config_windows(const Json& experiment);

}  // namespace gibbsrec
