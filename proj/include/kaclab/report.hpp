#pragma once

#include "kaclab/config.hpp"
#include "kaclab/estimate.hpp"
#include "kaclab/rational.hpp"

#include <string>

namespace kaclab {

/// Machine-readable experiment report. Exact rational results and statistical
/// estimates live in separate sections so downstream tooling never confuses
/// them. Everything except the header is a pure function of the inputs:
/// identical configs produce byte-identical bodies.
struct Report {
    Json header = Json::object(); // timestamp, tool id; excluded from determinism
    Json body = Json::object();   // inputs, exact, estimated, verdicts, pass

    void echo_inputs(const ExperimentConfig& cfg);
    void set_exact(const std::string& key, const Rational& value);
    void set_estimate(const std::string& key, const Estimate& e);
    void add_verdict(const std::string& name, bool pass);
    void finish(); // computes body.pass from the verdicts

    bool passed() const;
    std::string render() const;
    void write(const std::string& path) const;
};

Report make_report(const std::string& command);

void write_text_file(const std::string& path, const std::string& content);

} // namespace kaclab
