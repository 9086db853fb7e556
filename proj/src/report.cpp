#include "kaclab/report.hpp"

#include "kaclab/errors.hpp"

#include <chrono>
#include <fstream>

namespace kaclab {

Report make_report(const std::string& command) {
    Report r;
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    r.header["tool"] = "kaclab";
    r.header["version"] = "0.1.0";
    r.header["generated_at_unix"] = secs;
    r.body["command"] = command;
    r.body["inputs"] = Json::object();
    r.body["exact"] = Json::object();
    r.body["estimated"] = Json::object();
    r.body["verdicts"] = Json::array();
    r.body["pass"] = false;
    return r;
}

void Report::echo_inputs(const ExperimentConfig& cfg) {
    body["inputs"] = cfg.raw;
    // defaults are echoed so reports never depend on hidden values
    body["inputs"]["seed"] = cfg.seed;
    body["inputs"]["samples"] = cfg.samples;
    body["inputs"]["budget"] = cfg.budget;
    body["inputs"]["abstain_threshold"] = cfg.abstain_threshold;
}

void Report::set_exact(const std::string& key, const Rational& value) {
    body["exact"][key] = value.str();
}

void Report::set_estimate(const std::string& key, const Estimate& e) {
    Json j;
    j["mean"] = e.mean;
    j["stderr"] = e.std_error;
    j["ci95"] = Json::array({e.ci95_low, e.ci95_high});
    j["n_samples"] = e.n_samples;
    j["n_abstained"] = e.n_abstained;
    body["estimated"][key] = std::move(j);
}

void Report::add_verdict(const std::string& name, bool pass) {
    body["verdicts"].push_back(Json{{"check", name}, {"pass", pass}});
}

void Report::finish() {
    bool all = true;
    for (const auto& v : body["verdicts"]) all = all && v.at("pass").get<bool>();
    body["pass"] = all;
}

bool Report::passed() const { return body.at("pass").get<bool>(); }

std::string Report::render() const {
    Json doc;
    doc["header"] = header;
    doc["body"] = body;
    return doc.dump(2) + "\n";
}

void Report::write(const std::string& path) const { write_text_file(path, render()); }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error(path + ": cannot open for writing");
    out << content;
}

} // namespace kaclab
