#pragma once

// Minimal section/key-value config reader for scenario files. Not installed;
// the public surface is load_scenario / dump_scenario.

#include <map>
#include <string>
#include <vector>

namespace agentsim::ini {

struct Section {
    std::string name;
    // insertion-ordered keys; duplicate keys within a section are an error
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const;
};

struct Document {
    std::vector<Section> sections;

    const Section* find(const std::string& name) const;
};

// Parses `[section]` headers and `key = value` lines. `#` and `;` start
// comments. Throws ParseError with the line number on malformed input.
Document parse(const std::string& text);

}  // namespace agentsim::ini
