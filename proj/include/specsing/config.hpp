#pragma once

#include <map>
#include <string>
#include <vector>

#include "specsing/deltas.hpp"
#include "specsing/potential.hpp"
#include "specsing/slab.hpp"

namespace specsing {

// ---------------------------------------------------------------------------
// Plain sectioned key=value configuration files:
//
//   # comment
//   [deltas]
//   centers   = 0.2, 0.5, 0.8
//   couplings = [0,4], [1.5,-2], [0,6]     # complex values as [re,im]
//   k_min     = 1
//   k_max     = 30
//
// Sections and keys are case-insensitive; values keep their case. Lists are
// comma separated at the top level (commas inside [...] belong to a complex
// literal). All parse and validation problems throw MalformedConfig or one of
// the other ConfigError subclasses.
// ---------------------------------------------------------------------------

struct ConfigFile {
    // section -> key -> raw value string (both lowered)
    std::map<std::string, std::map<std::string, std::string>> sections;

    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text,
                                   const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section,
                           const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
};

// Low-level value parsers, shared by the loaders and the CLI.
double parse_double(const std::string& text);
int parse_int(const std::string& text);
cplx parse_complex(const std::string& text);
std::vector<std::string> split_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<cplx> parse_complex_list(const std::string& text);
// "a:b" (inclusive integer range) or a comma list.
std::vector<int> parse_mode_list(const std::string& text);

struct DeltaRunConfig {
    DeltaArraySpec spec;
    double k_min = 1.0;
    double k_max = 30.0;
    int k_points = 1000;
    DeltaStrategy strategy = DeltaStrategy::ScanFixedCouplings;
    int solve_index = 0;
};

DeltaRunConfig load_delta_config(const ConfigFile& cf);

struct SlabRunConfig {
    SlabMedium medium; // nu/pumping fields are per-row, not taken from here
    std::vector<int> modes;
    std::vector<double> nus;
    bool want_single = true;
    bool want_double = true;
};

SlabRunConfig load_slab_config(const ConfigFile& cf);

} // namespace specsing
