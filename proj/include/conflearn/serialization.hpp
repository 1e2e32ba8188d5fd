#pragma once

#include "conflearn/analytic_approx.hpp"
#include "conflearn/confound_solver.hpp"
#include "conflearn/learning_dynamics.hpp"
#include "conflearn/payoff_geometry.hpp"
#include "conflearn/signal_model.hpp"

#include "json.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace conflearn {

using Json = nlohmann::ordered_json;

// Shortest form is not used: every float is written with 17 significant
// digits, "inf", "-inf" or "nan".
std::string format_double(double x);

// Finite values as JSON numbers, non-finite ones as the strings above.
Json json_number(double x);
double number_from_json(const Json& j, const std::string& what);

Json to_json(const ModelParams& p);
Json to_json(const Support& s);
Json to_json(const SignalSpec& s);
Json to_json(const Interval& i);
Json to_json(const IntervalSet& set);
Json to_json(const ShockSet& s);
Json to_json(const LambdaBounds& b);
Json to_json(const ValidationReport& r);
Json to_json(const LimitSummary& s);
Json to_json(const NoShockRoots& r);
Json to_json(const StationaryReport& r);
Json to_json(const BoundAnnotation& a);
Json to_json(const ApproxPipelineTrace& t);

// Strict readers: unknown keys and wrong types raise ConfigError.
ModelParams params_from_json(const Json& j);
SignalSpec signal_from_json(const Json& j);

// Interval as "(lo, hi)" with brackets reflecting openness; "empty" if empty.
std::string format_interval(const Interval& i);
std::string format_interval_set(const IntervalSet& set);

// Comma-separated rows with a mandatory header; fields are written as given.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    CsvWriter& operator<<(double x);
    CsvWriter& operator<<(const std::string& s);
    CsvWriter& operator<<(const char* s) { return *this << std::string(s); }
    CsvWriter& operator<<(std::size_t n);
    CsvWriter& operator<<(bool b);
    void end_row();

private:
    void field(const std::string& s);

    std::ostream& out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace conflearn
