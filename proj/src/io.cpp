#include "bell/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "bell/quantum.hpp"

namespace bell::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view token, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" +
                                    std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const std::size_t pos = s.find(sep);
        parts.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

json to_json(const chsh::Estimate& e) {
    json j;
    j["value"] = e.value;
    j["se"] = e.se ? json(*e.se) : json(nullptr);
    return j;
}

std::string outcome_token(Outcome o) { return o == Outcome::plus() ? "+1" : "-1"; }

Outcome parse_outcome(std::string_view token, std::size_t line) {
    if (token == "+1") return Outcome::plus();
    if (token == "-1") return Outcome::minus();
    throw std::invalid_argument("trial CSV line " + std::to_string(line) +
                                ": bad outcome '" + std::string(token) + "'");
}

}  // namespace

Angle parse_angle(std::string_view token) {
    std::string_view s = trim(token);
    if (s.empty()) throw std::invalid_argument("empty angle token");

    std::string lower(s);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const std::size_t pi_pos = lower.find("pi");
    if (pi_pos == std::string::npos) {
        return Angle(parse_number(s, "angle"));
    }

    std::string_view prefix = std::string_view(lower).substr(0, pi_pos);
    std::string_view suffix = std::string_view(lower).substr(pi_pos + 2);

    double sign = 1.0;
    if (!prefix.empty() && (prefix.front() == '+' || prefix.front() == '-')) {
        sign = prefix.front() == '-' ? -1.0 : 1.0;
        prefix.remove_prefix(1);
    }
    if (!prefix.empty() && prefix.back() == '*') prefix.remove_suffix(1);
    const double coefficient = prefix.empty() ? 1.0 : parse_number(prefix, "pi coefficient");

    double denominator = 1.0;
    if (!suffix.empty()) {
        if (suffix.front() != '/') {
            throw std::invalid_argument("cannot parse angle: '" + std::string(token) + "'");
        }
        suffix.remove_prefix(1);
        denominator = parse_number(suffix, "pi denominator");
        if (denominator == 0.0) throw std::invalid_argument("zero denominator in angle");
    }
    return Angle(sign * coefficient * std::numbers::pi / denominator);
}

std::vector<Angle> parse_angle_list(std::string_view csv) {
    std::vector<Angle> angles;
    for (std::string_view part : split(csv, ',')) angles.push_back(parse_angle(part));
    return angles;
}

chsh::ChshSettings parse_settings(std::string_view csv) {
    const std::vector<Angle> angles = parse_angle_list(csv);
    if (angles.size() != 4) {
        throw std::invalid_argument("expected four angles a,a',b,b'; got " +
                                    std::to_string(angles.size()));
    }
    return chsh::ChshSettings{angles[0], angles[1], angles[2], angles[3]};
}

std::string format_double(double value) {
    char buffer[32];
    const int len = std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return std::string(buffer, static_cast<std::size_t>(len));
}

json to_json(const JointDistribution& dist) {
    json j;
    j["p_pp"] = dist.p_pp;
    j["p_pm"] = dist.p_pm;
    j["p_mp"] = dist.p_mp;
    j["p_mm"] = dist.p_mm;
    j["se_pp"] = dist.se_pp ? json(*dist.se_pp) : json(nullptr);
    j["se_pm"] = dist.se_pm ? json(*dist.se_pm) : json(nullptr);
    j["se_mp"] = dist.se_mp ? json(*dist.se_mp) : json(nullptr);
    j["se_mm"] = dist.se_mm ? json(*dist.se_mm) : json(nullptr);
    j["n_samples"] = dist.n_samples ? json(*dist.n_samples) : json(nullptr);
    return j;
}

json to_json(const chsh::ChshSettings& settings) {
    json j;
    j["theta_a"] = settings.theta_a.radians();
    j["theta_a_prime"] = settings.theta_a_prime.radians();
    j["theta_b"] = settings.theta_b.radians();
    j["theta_b_prime"] = settings.theta_b_prime.radians();
    return j;
}

json to_json(const chsh::ChshResult& result) {
    json j;
    j["s_value"] = result.s_value;
    j["abs_s"] = std::abs(result.s_value);
    j["standard_error"] =
        result.standard_error ? json(*result.standard_error) : json(nullptr);
    json correlations;
    for (chsh::SettingPair pair : chsh::kAllPairs) {
        correlations[std::string(chsh::pair_label(pair))] =
            to_json(result.correlations[static_cast<std::size_t>(pair)]);
    }
    j["correlations"] = correlations;
    j["verdict"] = std::string(chsh::verdict_label(result.verdict));
    return j;
}

json to_json(const lhv::CheckReport& report) {
    json j;
    j["check_name"] = report.check_name;
    j["statistic"] = report.statistic;
    j["threshold"] = report.threshold;
    j["n_samples"] = report.n_samples;
    j["passed"] = report.passed;
    j["details"] = report.details;
    return j;
}

json to_json(const sim::ExperimentSummary& summary) {
    json j;
    j["source"] = summary.source;
    j["seed"] = summary.seed;
    j["n_trials"] = summary.n_trials;
    j["settings"] = to_json(summary.settings);
    json pairs;
    for (chsh::SettingPair pair : chsh::kAllPairs) {
        const auto& stats = summary.pairs[static_cast<std::size_t>(pair)];
        json p;
        p["count"] = stats.count;
        p["correlation"] = to_json(stats.correlation);
        pairs[std::string(chsh::pair_label(pair))] = p;
    }
    j["pairs"] = pairs;
    j["chsh"] = to_json(summary.chsh);
    j["violation_sigmas"] =
        summary.violation_sigmas ? json(*summary.violation_sigmas) : json(nullptr);
    return j;
}

json to_json(const rel::EventTimes& times) {
    json j;
    j["t_a_1"] = times.t_a_1;
    j["t_a_2"] = times.t_a_2;
    j["t_b_1"] = times.t_b_1;
    j["t_b_2"] = times.t_b_2;
    return j;
}

json to_json(const optimizer::ParametricSearchResult& result) {
    json j;
    j["family"] = result.family;
    json params;
    for (std::size_t i = 0; i < result.param_names.size(); ++i) {
        params[result.param_names[i]] = result.best_params[i];
    }
    j["best_parameters"] = params;
    j["best_abs_s"] = result.best_abs_s;
    j["standard_error"] = result.best_standard_error;
    j["evaluations"] = result.evaluations;
    return j;
}

std::string serialize_summary(const sim::ExperimentSummary& summary, std::string_view format) {
    if (format == "json") {
        return to_json(summary).dump(2) + "\n";
    }
    if (format == "csv") {
        std::string out = "key,value\n";
        const auto row = [&out](std::string_view key, const std::string& value) {
            out += std::string(key) + "," + value + "\n";
        };
        row("source", summary.source);
        row("seed", std::to_string(summary.seed));
        row("n_trials", std::to_string(summary.n_trials));
        for (chsh::SettingPair pair : chsh::kAllPairs) {
            const auto& stats = summary.pairs[static_cast<std::size_t>(pair)];
            const std::string label(chsh::pair_label(pair));
            row("count_" + label, std::to_string(stats.count));
            row("e_" + label, format_double(stats.correlation.value));
            row("se_" + label, format_double(stats.correlation.se.value_or(0.0)));
        }
        row("s_value", format_double(summary.chsh.s_value));
        row("se_s", format_double(summary.chsh.standard_error.value_or(0.0)));
        row("verdict", std::string(chsh::verdict_label(summary.chsh.verdict)));
        if (summary.violation_sigmas) {
            row("violation_sigmas", format_double(*summary.violation_sigmas));
        }
        return out;
    }
    throw std::invalid_argument("unsupported summary format: '" + std::string(format) + "'");
}

void write_trials_csv(std::ostream& out, std::span<const sim::TrialRecord> records) {
    out << "trial,pair,out_l,out_r\n";
    for (const sim::TrialRecord& record : records) {
        out << record.trial_index << ',' << chsh::pair_label(record.pair) << ','
            << outcome_token(record.outcome_l) << ',' << outcome_token(record.outcome_r)
            << '\n';
    }
}

std::vector<sim::TrialRecord> read_trials_csv(std::istream& in) {
    std::vector<sim::TrialRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        if (line_no == 1) {
            if (view != "trial,pair,out_l,out_r") {
                throw std::invalid_argument("trial CSV: bad header '" + std::string(view) + "'");
            }
            continue;
        }
        const auto fields = split(view, ',');
        if (fields.size() != 4) {
            throw std::invalid_argument("trial CSV line " + std::to_string(line_no) +
                                        ": expected 4 fields");
        }
        sim::TrialRecord record;
        std::uint64_t index = 0;
        const auto [ptr, ec] =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), index);
        if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) {
            throw std::invalid_argument("trial CSV line " + std::to_string(line_no) +
                                        ": bad trial index");
        }
        record.trial_index = index;
        const auto pair = chsh::pair_from_label(fields[1]);
        if (!pair) {
            throw std::invalid_argument("trial CSV line " + std::to_string(line_no) +
                                        ": bad pair '" + std::string(fields[1]) + "'");
        }
        record.pair = *pair;
        record.outcome_l = parse_outcome(fields[2], line_no);
        record.outcome_r = parse_outcome(fields[3], line_no);
        records.push_back(record);
    }
    return records;
}

std::string strategies_csv(std::span<const optimizer::StrategyReport> reports) {
    std::string out = "a_at_a,a_at_ap,b_at_b,b_at_bp,s\n";
    for (const optimizer::StrategyReport& report : reports) {
        const auto& s = report.strategy;
        out += outcome_token(s.a_at_theta_a) + "," + outcome_token(s.a_at_theta_a_prime) + "," +
               outcome_token(s.b_at_theta_b) + "," + outcome_token(s.b_at_theta_b_prime) + "," +
               format_double(report.s_value) + "\n";
    }
    return out;
}

std::string curve_csv(std::uint64_t points) {
    if (points < 2) throw std::invalid_argument("need at least 2 curve points");
    std::string out = "delta,E\n";
    for (std::uint64_t i = 0; i < points; ++i) {
        const double delta = static_cast<double>(i) * std::numbers::pi /
                             static_cast<double>(points - 1);
        out += format_double(delta) + "," +
               format_double(quantum::correlation(Angle(delta), Angle(0.0))) + "\n";
    }
    return out;
}

}  // namespace bell::io
