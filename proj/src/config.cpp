#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polykern/harness.hpp"

namespace polykern {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& text) {
    const std::string s = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (used != s.size()) throw std::invalid_argument("trailing characters in number: '" + text + "'");
    return v;
}

// Plain numbers plus "pi", "pi/N" and "N*pi" for angles.
double parse_real(const std::string& text) {
    const std::string s = trim(text);
    if (s == "pi") return M_PI;
    if (s.rfind("pi/", 0) == 0) return M_PI / parse_double(s.substr(3));
    if (s.size() > 3 && s.compare(s.size() - 3, 3, "*pi") == 0) return parse_double(s.substr(0, s.size() - 3)) * M_PI;
    return parse_double(s);
}

long parse_int(const std::string& text) {
    const double v = parse_double(text);
    if (v != std::floor(v)) throw std::invalid_argument("expected an integer: '" + text + "'");
    return long(v);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_double(item));
    return out;
}

}  // namespace

std::string to_string(Setting s) {
    switch (s) {
        case Setting::circle_model: return "circle_model";
        case Setting::circle_perturbed: return "circle_perturbed";
        case Setting::lemniscate: return "lemniscate";
    }
    return "?";
}

Setting setting_from_string(const std::string& s) {
    if (s == "circle_model") return Setting::circle_model;
    if (s == "circle_perturbed") return Setting::circle_perturbed;
    if (s == "lemniscate") return Setting::lemniscate;
    throw std::invalid_argument("unknown setting '" + s + "'");
}

std::vector<GridPoint> default_grid() {
    const std::vector<cplx> pts{0.0, 1.0, -1.0, 2.0, -2.0, {0.0, 1.0}, {0.0, -1.0}, {1.0, 1.0}};
    std::vector<GridPoint> grid;
    for (const auto& a : pts)
        for (const auto& b : pts) grid.push_back({a, b});
    return grid;
}

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i') return {parse_double(s), 0.0};

    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t pos = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            pos = k;
            break;
        }
    }
    auto imag_of = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t);
    };
    if (pos == std::string::npos) return {0.0, imag_of(body)};
    return {parse_double(body.substr(0, pos)), imag_of(body.substr(pos))};
}

SmoothFactor parse_g_spec(const std::string& text) {
    const std::string s = trim(text);
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("g spec needs 'kind:values': '" + s + "'");
    const std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
    if (kind == "const") return SmoothFactor::constant(parse_double(rest));
    if (kind == "trig") {
        const auto bar = rest.find('|');
        const auto cosv = parse_list(rest.substr(0, bar));
        const auto sinv = bar == std::string::npos ? std::vector<double>{} : parse_list(rest.substr(bar + 1));
        return SmoothFactor::trig(cosv, sinv);
    }
    if (kind == "table") return SmoothFactor::tabulated(parse_list(rest));
    throw std::invalid_argument("unknown g kind '" + kind + "'");
}

StudyConfig parse_config(std::istream& in) {
    StudyConfig cfg;
    double rho = -1.0;  // r^m, resolved once m is known
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        try {
            if (key == "setting") cfg.setting = setting_from_string(val);
            else if (key == "gamma") cfg.gamma = parse_real(val);
            else if (key == "tau") cfg.tau = parse_real(val);
            else if (key == "g") cfg.g_spec = val;
            else if (key == "r") cfg.r = parse_real(val);
            else if (key == "rho") rho = parse_real(val);
            else if (key == "m") cfg.m = int(parse_int(val));
            else if (key == "t") cfg.t = parse_real(val);
            else if (key == "j") cfg.j = int(parse_int(val));
            else if (key == "density") cfg.density = parse_real(val);
            else if (key == "n_list") {
                cfg.n_list.clear();
                for (double v : parse_list(val)) cfg.n_list.push_back(std::size_t(v));
            } else if (key == "grid") {
                if (val == "default") {
                    cfg.grid = default_grid();
                } else {
                    cfg.grid.clear();
                    for (const auto& pair : split(val, ';')) {
                        const auto c = pair.find(':');
                        if (c == std::string::npos) throw std::invalid_argument("grid entry needs a:b");
                        cfg.grid.push_back({parse_complex(pair.substr(0, c)), parse_complex(pair.substr(c + 1))});
                    }
                }
            } else if (key == "precision_bits") cfg.precision_bits = int(parse_int(val));
            else if (key == "output") cfg.output_path = val;
            else throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (rho > 0) cfg.r = std::pow(rho, 1.0 / cfg.m);
    return cfg;
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(in);
}

void StudyConfig::validate() const {
    if (n_list.empty()) throw std::invalid_argument("n_list is empty");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] <= n_list[k - 1]) throw std::invalid_argument("n_list must be strictly increasing");
    if (n_list.front() == 0) throw std::invalid_argument("n_list entries must be positive");
    if (grid.empty()) throw std::invalid_argument("grid is empty");
    if (precision_bits <= 0) throw std::invalid_argument("precision_bits must be positive");
    if (setting == Setting::lemniscate) {
        lemniscate().validate();
        if (j < 0 || j >= m) throw std::invalid_argument("component index j out of range");
        if (!(density > 0)) throw std::invalid_argument("density must be positive");
    } else {
        circle_weight().validate();
    }
}

CircleWeight StudyConfig::circle_weight() const {
    SmoothFactor g = setting == Setting::circle_model ? SmoothFactor::constant() : parse_g_spec(g_spec);
    return {gamma, tau, g};
}

}  // namespace polykern
