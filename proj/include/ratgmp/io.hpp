#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratgmp/discriminant.hpp"
#include "ratgmp/gmp.hpp"
#include "ratgmp/measure.hpp"
#include "ratgmp/orf.hpp"
#include "ratgmp/potential.hpp"
#include "ratgmp/regularity.hpp"

namespace ratgmp::io {

using nlohmann::json;

// Extended reals are numbers or the string "inf".
ExtendedReal extended_from_json(const json& j);
json to_json(const ExtendedReal& x);

FiniteGapSet set_from_json(const json& j);  // [[lo, hi], ...]
json to_json(const FiniteGapSet& e);

// Measure document:
//   bands:   [[lo, hi], ...]
//   density: "arcsine" | "equilibrium" | {"type": "chebyshev", "numerator_roots": [...]}
//            | {"type": "sampled", "nodes": [[...] per band], "weights": [[...] per band]}
//   band_weights: per-band mixture weights for "arcsine" (default equal)
//   atoms:   [[x, w], ...] with x a number or "inf"
//   continuous_weight: mass of the band part relative to the atoms' listed weights (default 1)
//   essential_support: [[lo, hi], ...] (default: the bands)
Measure measure_from_json(const json& j, int nodes = kDefaultNodesPerBand);
json to_json(const Measure& mu);

PoleSequence poles_from_json(const json& j);
json to_json(const PoleSequence& c);

json to_json(const PrecisionAttempt& a);
json summary_json(const OrthoSystem& sys);
json to_json(const StructureReport& r);
json to_json(const Discriminant& d);
json to_json(const PreimageCheck& p);
json to_json(const BlockJacobi& j, const MagicResidual& m);
json to_json(const PeriodicGmp& p);
json to_json(const Trend& t);
json to_json(const KappaSection& s);
json to_json(const BetaSection& s);
json to_json(const GrowthSection& s);
json to_json(const ZeroDistSection& s);
json to_json(const RegularityReport& r);
json to_json(const CesaroSection& s);
json to_json(const SparseStats& s);

json read_json(const std::filesystem::path& p);
void write_json(const std::filesystem::path& p, const json& j);

// CSV writer with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header);
  CsvWriter& row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace ratgmp::io
