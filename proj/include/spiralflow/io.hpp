#pragma once

#include <map>
#include <string>
#include <vector>

#include "spiralflow/asymptotics.hpp"
#include "spiralflow/flow.hpp"
#include "spiralflow/validation.hpp"

namespace spiralflow {

// Accepts decimal radians and pi fractions: "pi/4", "3pi/4", "-pi/3",
// "1.5pi", "2".
double parse_angle(const std::string& text);

// Shortest 17-significant-digit representation; round-trips doubles.
std::string fmt_g17(double v);

// Flat `key = value` configuration with '#' comments and dotted keys.
struct FlatConfig {
    std::map<std::string, std::string> kv;

    static FlatConfig load(const std::string& path);
    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
};

// Write-to-temp plus atomic rename; no partial files on failure.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

std::string curves_to_csv(const std::vector<CurveSample>& curves);
std::vector<CurveSample> curves_from_csv(const std::string& text);
std::string curves_to_json(const std::vector<CurveSample>& curves);
std::string curves_to_svg(const std::vector<CurveSample>& curves);

std::string monodromy_to_json(const SpiralParams& params, const MonodromyData& md,
                              const ConnectionConstants& cc);
std::string solution_to_json(const FlowSolution& fs);
std::string painleve_to_csv(const std::vector<double>& xs, const std::vector<double>& im_u);
std::string report_to_json(const VerificationReport& rep);
std::string report_to_table(const VerificationReport& rep);
std::string remainder_to_csv(const RemainderReport& rep);
std::string remainder_summary_json(const RemainderReport& rep);

}  // namespace spiralflow
