#include "speclab/library.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace speclab {

namespace {

const std::map<std::string, std::string>& table() {
    static const std::map<std::string, std::string> t = {
#include "speclab/builtin_data.inc"
    };
    return t;
}

}  // namespace

std::vector<std::string> builtin_labels() {
    std::vector<std::string> out;
    for (const auto& [k, v] : table()) out.push_back(k);
    return out;
}

std::string builtin_document(const std::string& label) {
    auto it = table().find(label);
    if (it == table().end()) {
        std::string known;
        for (const auto& l : builtin_labels()) known += (known.empty() ? "" : ", ") + l;
        throw DomainError("unknown instance '" + label + "' (built-in: " + known + ")");
    }
    return it->second;
}

InstanceSpec load_instance(const std::string& label_or_path) {
    if (table().count(label_or_path)) return parse_instance(builtin_document(label_or_path));
    if (!std::filesystem::exists(label_or_path)) builtin_document(label_or_path);  // throws with the list
    std::ifstream in(label_or_path);
    if (!in) throw ParseError(label_or_path, "cannot open instance file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_instance(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(label_or_path + (e.path().empty() ? "" : ":" + e.path()), e.what());
    }
}

}  // namespace speclab
