#pragma once

// Text parsing of CLI arguments and JSON / plain-text rendering of results.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cbchern/cones.hpp"

namespace cbchern {

using Json = nlohmann::ordered_json;

/// "sl2", "sl3", ... (case-insensitive prefix).
AlgebraSpec parse_algebra(std::string_view text);

/// "a,b;c,d;0" -> one weight per ';'-separated entry.
std::vector<Weight> parse_weight_list(AlgebraSpec alg, std::string_view text);

/// "1|2|3|4,5" -> point sets; every point must lie in 1..n.
std::vector<PointSet> parse_parts(int n, std::string_view text);

/// "2,1" -> {2, 1}.
std::vector<int> parse_int_list(std::string_view text);

Json to_json(const Weight& w);
Json to_json(const BundleSpec& spec);
Json to_json(const ChowClass& c);
Json to_json(const VerificationReport& report);
Json to_json(const ExtremalityCertificate& cert);
Json to_json(const BasisFamily& family);
Json to_json(const LevelReport& report);

/// Inverse of to_json(ChowClass); throws ParseError on schema violations.
ChowClass chow_from_json(const Json& doc);
ChowClass chow_from_json_text(std::string_view text);

std::string set_text(PointSet s);
std::string to_text(const ChowClass& c);
std::string to_text(const VerificationReport& report);
std::string to_text(const BasisFamily& family);

}  // namespace cbchern
