#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "orthodec/chaos.hpp"
#include "orthodec/decomposition.hpp"
#include "orthodec/inequality.hpp"
#include "orthodec/simulation.hpp"
#include "orthodec/vc_entropy.hpp"

namespace orthodec {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.3.0";

/// {"d": int, "entries": [{"index": [...], "coeff": x}, ...]}, entries in
/// lexicographic index order.
Json to_json(const ChaosElement& f);
ChaosElement chaos_from_json(const Json& j);

/// {"d": int, "m": ..., "mJ": {"<bitmask>": ...}, "g": ...}.
Json to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const Json& j);

/// "rademacher", "gaussian", "gaussian:<variance>", or
/// {"kind": "custom", "points": [...], "probs": [...]}.
InnovationLaw law_from_json(const Json& j);
Json to_json(const InnovationLaw& law);

Json to_json(const Rect& r);
Rect rect_from_json(const Json& j);

Json to_json(const OmdReport& r);
Json to_json(const SeriesReport& r);
Json to_json(const LinearConditionReport& r);
Json to_json(const LpEstimate& r);
Json to_json(const MomentRatioReport& r);
Json to_json(const KSReport& r);
Json to_json(const CovarianceReport& r);
Json to_json(const TailReport& r);
Json to_json(const HolderReport& r, bool with_rows = true);
Json to_json(const VcResult& r);
Json to_json(const CoveringReport& r);
/// Summary statistics per column.
Json summary_json(const EmpiricalSample& s);

std::string paths_csv(const PathSample& p);
std::string sample_csv(const EmpiricalSample& s);
std::string tail_csv(const TailReport& r);
std::string holder_csv(const HolderReport& r);
std::string covering_csv(const CoveringReport& r);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace orthodec
