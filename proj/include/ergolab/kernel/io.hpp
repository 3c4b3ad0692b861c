#pragma once

#include <nlohmann/json.hpp>
#include <filesystem>
#include <string>

#include "ergolab/kernel/types.hpp"

namespace ergolab::kernel::io {

using nlohmann::json;

// JSON form: {"n": <size>, "rates": [[...], ...]}.
json rate_matrix_to_json(const RateMatrix& gen);
RateMatrix rate_matrix_from_json(const json& j);

// Text form: first line the size, then one whitespace-separated row per line.
std::string rate_matrix_to_text(const RateMatrix& gen);
RateMatrix rate_matrix_from_text(const std::string& text);

RateMatrix rate_matrix_from_file(const std::filesystem::path& path);  // .json or text

// Measures serialize as a plain weight array.
json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const json& j, bool normalized);

json invariance_check_to_json(const InvarianceCheck& c);
json domination_to_json(const DominationCertificate& c);
json uniqueness_to_json(const UniquenessReport& r);
json absorbing_to_json(const AbsorbingDecomposition& d);
json kernel_to_json(const StochasticKernel& k);

}  // namespace ergolab::kernel::io
