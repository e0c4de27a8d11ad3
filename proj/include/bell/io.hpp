#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bell/chsh.hpp"
#include "bell/experiment.hpp"
#include "bell/lhv.hpp"
#include "bell/optimizer.hpp"
#include "bell/relativity.hpp"
#include "bell/types.hpp"

namespace bell::io {

using json = nlohmann::ordered_json;

/// Parses an angle given as decimal radians or as a fraction of pi:
/// "0.3927", "pi/8", "-pi/8", "3pi/8", "2pi" are all accepted.
Angle parse_angle(std::string_view token);

/// Comma-separated angles.
std::vector<Angle> parse_angle_list(std::string_view csv);

/// Exactly four comma-separated angles in the order a, a', b, b'.
chsh::ChshSettings parse_settings(std::string_view csv);

/// Shortest representation that still round-trips a double (17 significant
/// digits at most). Used for all CSV output.
std::string format_double(double value);

json to_json(const JointDistribution& dist);
json to_json(const chsh::ChshSettings& settings);
json to_json(const chsh::ChshResult& result);
json to_json(const lhv::CheckReport& report);
json to_json(const sim::ExperimentSummary& summary);
json to_json(const rel::EventTimes& times);
json to_json(const optimizer::ParametricSearchResult& result);

/// "json" or "csv" (flat key,value rows); anything else is an error.
std::string serialize_summary(const sim::ExperimentSummary& summary, std::string_view format);

// Trial stream format: header "trial,pair,out_l,out_r", pair in
// {ab, abp, apb, apbp}, outcomes +1/-1. Re-ingesting reproduces the summary
// bit-exactly.
void write_trials_csv(std::ostream& out, std::span<const sim::TrialRecord> records);
std::vector<sim::TrialRecord> read_trials_csv(std::istream& in);

/// 16 rows of "a_at_a,a_at_ap,b_at_b,b_at_bp,s".
std::string strategies_csv(std::span<const optimizer::StrategyReport> reports);

/// "delta,E" rows sampling the exact correlation over [0, pi] inclusive;
/// points >= 2.
std::string curve_csv(std::uint64_t points);

}  // namespace bell::io
