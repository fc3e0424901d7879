#include "fmlab/report.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/util.hpp"

namespace fmlab {

ordered_json Report::to_json() const {
    ordered_json j;
    j["command"] = command;
    j["arguments"] = arguments;
    j["config_hash"] = config_hash;
    j["scale"] = scale;
    j["verdicts"] = verdicts;
    j["witnesses"] = witnesses;
    j["seconds"] = seconds;
    return j;
}

Report Report::from_json(const ordered_json& j) {
    if (!j.is_object()) throw input_error("report: expected a JSON object");
    for (const char* key : {"command", "arguments", "config_hash", "scale", "verdicts", "witnesses", "seconds"})
        if (!j.contains(key)) throw input_error(std::string("report: missing field '") + key + "'");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.arguments = j.at("arguments").get<std::vector<std::string>>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.scale = j.at("scale");
    r.verdicts = j.at("verdicts");
    r.witnesses = j.at("witnesses");
    r.seconds = j.at("seconds").get<double>();
    return r;
}

Report make_report(const std::string& command, const std::vector<std::string>& arguments) {
    Report r;
    r.command = command;
    r.arguments = arguments;
    std::string blob = command;
    for (const auto& a : arguments) {
        blob.push_back('\0');
        blob += a;
    }
    r.config_hash = hex64(fnv1a(blob));
    r.scale = ordered_json::object();
    r.verdicts = ordered_json::object();
    r.witnesses = ordered_json::object();
    return r;
}

ordered_json strip_timing(ordered_json j) {
    j.erase("seconds");
    return j;
}

} // namespace fmlab
