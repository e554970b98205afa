#include "specsing/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "specsing/errors.hpp"

namespace specsing {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

void reject_unknown_keys(const ConfigFile& cf, const std::string& section,
                         const std::set<std::string>& known) {
    const auto it = cf.sections.find(section);
    if (it == cf.sections.end()) return;
    for (const auto& [key, value] : it->second) {
        (void)value;
        if (!known.count(key))
            throw MalformedConfig("unknown key '" + key + "' in [" + section +
                                  "]");
    }
}

} // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw MalformedConfig("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& origin) {
    ConfigFile cf;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = [&] {
            return origin + ":" + std::to_string(lineno);
        };
        if (line.front() == '[') {
            if (line.back() != ']')
                throw MalformedConfig("unterminated section header at " +
                                      where());
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section.empty())
                throw MalformedConfig("empty section name at " + where());
            cf.sections[section]; // an empty section is legal
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw MalformedConfig("expected key = value at " + where());
        if (section.empty())
            throw MalformedConfig("key outside any [section] at " + where());
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw MalformedConfig("empty key at " + where());
        auto& sec = cf.sections[section];
        if (sec.count(key))
            throw MalformedConfig("duplicate key '" + key + "' at " + where());
        sec[key] = value;
    }
    return cf;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto it = sections.find(lower(section));
    return it != sections.end() && it->second.count(lower(key)) > 0;
}

const std::string& ConfigFile::get(const std::string& section,
                                   const std::string& key) const {
    const auto it = sections.find(lower(section));
    if (it == sections.end())
        throw MalformedConfig("missing section [" + section + "]");
    const auto kt = it->second.find(lower(key));
    if (kt == it->second.end())
        throw MalformedConfig("missing key '" + key + "' in [" + section +
                              "]");
    return kt->second;
}

std::string ConfigFile::get_or(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size())
            throw MalformedConfig("trailing characters after number: '" + t +
                                  "'");
        return v;
    } catch (const MalformedConfig&) {
        throw;
    } catch (const std::exception&) {
        throw MalformedConfig("not a number: '" + t + "'");
    }
}

int parse_int(const std::string& text) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const int v = std::stoi(t, &used);
        if (used != t.size())
            throw MalformedConfig("trailing characters after integer: '" + t +
                                  "'");
        return v;
    } catch (const MalformedConfig&) {
        throw;
    } catch (const std::exception&) {
        throw MalformedConfig("not an integer: '" + t + "'");
    }
}

cplx parse_complex(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw MalformedConfig("empty value where a number expected");
    if (t.front() == '[') {
        if (t.back() != ']')
            throw MalformedConfig("unterminated complex literal: '" + t + "'");
        const std::string body = t.substr(1, t.size() - 2);
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            throw MalformedConfig("complex literal needs [re,im]: '" + t +
                                  "'");
        return {parse_double(body.substr(0, comma)),
                parse_double(body.substr(comma + 1))};
    }
    return {parse_double(t), 0.0};
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0)
        throw MalformedConfig("unbalanced brackets in list: '" + text + "'");
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
    for (const auto& tok : out)
        if (tok.empty())
            throw MalformedConfig("empty element in list: '" + text + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split_list(text)) out.push_back(parse_double(tok));
    return out;
}

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    for (const auto& tok : split_list(text)) out.push_back(parse_complex(tok));
    return out;
}

std::vector<int> parse_mode_list(const std::string& text) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    if (colon != std::string::npos) {
        const int a = parse_int(t.substr(0, colon));
        const int b = parse_int(t.substr(colon + 1));
        if (b < a)
            throw MalformedConfig("descending mode range: '" + t + "'");
        std::vector<int> out;
        for (int m = a; m <= b; ++m) out.push_back(m);
        return out;
    }
    std::vector<int> out;
    for (const auto& tok : split_list(t)) out.push_back(parse_int(tok));
    return out;
}

DeltaRunConfig load_delta_config(const ConfigFile& cf) {
    if (!cf.sections.count("deltas"))
        throw MalformedConfig("missing section [deltas]");
    reject_unknown_keys(cf, "deltas",
                        {"centers", "couplings", "k_min", "k_max", "k_points",
                         "strategy", "solve_index"});

    DeltaRunConfig rc;
    rc.spec.centers = parse_double_list(cf.get("deltas", "centers"));
    rc.spec.couplings = parse_complex_list(cf.get("deltas", "couplings"));
    rc.k_min = parse_double(cf.get_or("deltas", "k_min", "1"));
    rc.k_max = parse_double(cf.get_or("deltas", "k_max", "30"));
    rc.k_points = parse_int(cf.get_or("deltas", "k_points", "1000"));
    const std::string strat = lower(cf.get_or("deltas", "strategy", "scan"));
    if (strat == "scan") {
        rc.strategy = DeltaStrategy::ScanFixedCouplings;
    } else if (strat == "solve") {
        rc.strategy = DeltaStrategy::SolveOneCoupling;
    } else {
        throw MalformedConfig("strategy must be 'scan' or 'solve', got '" +
                              strat + "'");
    }
    rc.solve_index = parse_int(cf.get_or("deltas", "solve_index", "0"));

    validate(PotentialSpec{rc.spec});
    if (!(rc.k_min > 0.0) || !(rc.k_max > rc.k_min))
        throw MalformedConfig("need 0 < k_min < k_max");
    if (rc.k_points < 2)
        throw MalformedConfig("k_points must be at least 2");
    if (rc.solve_index < 0 ||
        rc.solve_index >= static_cast<int>(rc.spec.centers.size()))
        throw MalformedConfig("solve_index out of range");
    return rc;
}

SlabRunConfig load_slab_config(const ConfigFile& cf) {
    if (!cf.sections.count("slab"))
        throw MalformedConfig("missing section [slab]");
    reject_unknown_keys(cf, "slab",
                        {"n0", "l_um", "lambda0_nm", "gamma_hat",
                         "alpha_per_cm", "pumping", "modes", "nus"});

    SlabRunConfig rc;
    rc.medium.n0 = parse_double(cf.get_or("slab", "n0", "3.4"));
    rc.medium.L_um = parse_double(cf.get_or("slab", "l_um", "300"));
    rc.medium.lambda0_nm =
        parse_double(cf.get_or("slab", "lambda0_nm", "1500"));
    rc.medium.gamma_hat = parse_double(cf.get_or("slab", "gamma_hat", "0.02"));
    rc.medium.alpha_per_cm =
        parse_double(cf.get_or("slab", "alpha_per_cm", "200"));

    const std::string pump = lower(cf.get_or("slab", "pumping", "both"));
    if (pump == "single") {
        rc.want_double = false;
    } else if (pump == "double") {
        rc.want_single = false;
    } else if (pump != "both") {
        throw MalformedConfig(
            "pumping must be 'single', 'double' or 'both', got '" + pump +
            "'");
    }

    rc.modes = parse_mode_list(cf.get_or("slab", "modes", "1358:1362"));
    rc.nus = parse_double_list(cf.get_or("slab", "nus", "0, 0.1, 0.2, 0.3, 0.5"));

    validate_medium(rc.medium);
    if (rc.modes.empty()) throw EmptyArray("modes list is empty");
    if (rc.nus.empty()) throw EmptyArray("nus list is empty");
    for (int m : rc.modes)
        if (m <= 0) throw MalformedConfig("mode numbers must be positive");
    for (double nu : rc.nus)
        if (nu < 0.0) throw MalformedConfig("nu must be >= 0");
    return rc;
}

} // namespace specsing
