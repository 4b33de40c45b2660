#include "subdivkit/io.hpp"

#include "subdivkit/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace subdivkit::io {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool rational_text(const std::string& s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    bool slash = false, digits = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '/') {
            if (slash || !digits) return false;
            slash = true;
            digits = false;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits = true;
        } else {
            return false;
        }
    }
    return digits;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const char* what) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end())
            bad(std::string(what) + ": unknown key \"" + key + "\"");
    }
}

Scalar coeff_from_json(const json& v, const char* what) {
    if (v.is_string()) return parse_scalar(v.get<std::string>());
    if (v.is_number_integer()) return Scalar(static_cast<long long>(v.get<int64_t>()));
    if (v.is_number_float()) return Scalar(v.get<double>());
    bad(std::string(what) + ": coefficient must be a string or number");
}

json coeff_to_json(const Scalar& s) { return json(scalar_string(s)); }

Mask mask_from_json(const json& obj, const char* what) {
    if (!obj.is_object()) bad(std::string(what) + ": expected an object");
    reject_unknown_keys(obj, {"dilation", "support", "coeffs", "name"}, what);
    for (const char* key : {"dilation", "support", "coeffs"})
        if (!obj.contains(key)) bad(std::string(what) + ": missing key \"" + key + "\"");
    if (obj.contains("name") && !obj["name"].is_string())
        bad(std::string(what) + ": name must be a string");

    const json& d = obj["dilation"];
    if (!d.is_number_integer()) bad(std::string(what) + ": dilation must be an integer");
    long M = d.get<long>();
    if (M < 2) bad(std::string(what) + ": dilation must be >= 2");

    const json& sup = obj["support"];
    if (!sup.is_array() || sup.size() != 2 || !sup[0].is_number_integer() ||
        !sup[1].is_number_integer())
        bad(std::string(what) + ": support must be [l, h] with integer bounds");
    long lo = sup[0].get<long>(), hi = sup[1].get<long>();
    if (lo > hi) bad(std::string(what) + ": support bounds out of order");

    const json& cs = obj["coeffs"];
    if (!cs.is_array()) bad(std::string(what) + ": coeffs must be an array");
    if (static_cast<long>(cs.size()) != hi - lo + 1)
        bad(std::string(what) + ": coeffs length " + std::to_string(cs.size()) +
            " does not match support length " + std::to_string(hi - lo + 1));
    std::vector<Scalar> vals;
    vals.reserve(cs.size());
    for (const auto& c : cs) vals.push_back(coeff_from_json(c, what));
    return Mask(FiniteSequence(lo, std::move(vals)), M);
}

json mask_to_json(const Mask& a, const std::string& name) {
    json obj = json::object();
    obj["dilation"] = a.dilation;
    long lo = a.seq.is_zero() ? 0 : a.seq.lower();
    long hi = a.seq.is_zero() ? 0 : a.seq.upper();
    obj["support"] = json::array({lo, hi});
    json cs = json::array();
    for (long k = lo; k <= hi; ++k) cs.push_back(coeff_to_json(a.seq.at(k)));
    obj["coeffs"] = std::move(cs);
    if (!name.empty()) obj["name"] = name;
    return obj;
}

std::vector<double> csv_row(const std::string& line, size_t lineno) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trimmed(cell);
        if (cell.empty()) bad("polygon csv: empty cell on line " + std::to_string(lineno));
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0' || !std::isfinite(v))
            bad("polygon csv: bad number \"" + cell + "\" on line " + std::to_string(lineno));
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string format_float(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string scalar_string(const Scalar& s) {
    if (s.exact()) return s.rat().get_str();
    return format_float(s.dbl());
}

Scalar parse_scalar(const std::string& text) {
    std::string t = trimmed(text);
    if (t.empty()) bad("scalar: empty text");
    if (rational_text(t)) {
        size_t slash = t.find('/');
        if (slash != std::string::npos && mpz_class(t.substr(slash + 1)) == 0)
            bad("scalar: zero denominator in \"" + t + "\"");
        mpq_class q(t);
        q.canonicalize();
        return Scalar(q);
    }
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') bad("scalar: cannot parse \"" + t + "\"");
    if (!std::isfinite(v)) bad("scalar: non-finite value \"" + t + "\"");
    return Scalar(v);
}

Mask parse_mask_json(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("mask json: ") + e.what());
    }
    return mask_from_json(obj, "mask json");
}

std::string emit_mask_json(const Mask& a, const std::string& name) {
    return mask_to_json(a, name).dump(2) + "\n";
}

quasistat::SchemeSpec parse_scheme_json(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("scheme json: ") + e.what());
    }
    if (!obj.is_object()) bad("scheme json: expected an object");
    reject_unknown_keys(obj, {"dilation", "masks", "name"}, "scheme json");
    for (const char* key : {"dilation", "masks"})
        if (!obj.contains(key)) bad(std::string("scheme json: missing key \"") + key + "\"");
    if (!obj["dilation"].is_number_integer()) bad("scheme json: dilation must be an integer");
    long M = obj["dilation"].get<long>();
    const json& ms = obj["masks"];
    if (!ms.is_array() || ms.empty()) bad("scheme json: masks must be a non-empty array");
    std::vector<Mask> masks;
    for (size_t i = 0; i < ms.size(); ++i) {
        std::string what = "scheme json: mask " + std::to_string(i + 1);
        Mask a = mask_from_json(ms[i], what.c_str());
        if (a.dilation != M) bad(what + ": dilation differs from the scheme");
        if (!seqalg::is_normalized(a)) bad(what + ": coefficients do not sum to 1");
        masks.push_back(std::move(a));
    }
    return quasistat::SchemeSpec(std::move(masks));
}

std::string emit_scheme_json(const quasistat::SchemeSpec& spec, const std::string& name) {
    json obj = json::object();
    obj["dilation"] = spec.dilation;
    json ms = json::array();
    for (const auto& a : spec.masks) ms.push_back(mask_to_json(a, ""));
    obj["masks"] = std::move(ms);
    if (!name.empty()) obj["name"] = name;
    return obj.dump(2) + "\n";
}

Polygon parse_polygon_csv(const std::string& text) {
    Polygon p;
    std::stringstream ss(text);
    std::string line;
    size_t lineno = 0, cols = 0;
    bool first_data = true;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trimmed(line);
        if (line.empty()) continue;
        if (first_data) {
            std::string low = line;
            std::transform(low.begin(), low.end(), low.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            low.erase(std::remove_if(low.begin(), low.end(),
                                     [](unsigned char c) { return std::isspace(c); }),
                      low.end());
            if (low == "x,y" || low == "x,y,z") {
                cols = (low == "x,y") ? 2 : 3;
                first_data = false;
                continue;
            }
        }
        std::vector<double> row = csv_row(line, lineno);
        if (row.size() != 2 && row.size() != 3)
            bad("polygon csv: line " + std::to_string(lineno) + " has " +
                std::to_string(row.size()) + " columns, want 2 or 3");
        if (cols == 0) cols = row.size();
        if (row.size() != cols)
            bad("polygon csv: inconsistent column count on line " + std::to_string(lineno));
        p.points.push_back({row[0], row[1], row.size() == 3 ? row[2] : 0.0});
        first_data = false;
    }
    if (cols == 0 || p.points.size() < 2) bad("polygon csv: need at least two points");
    p.dim = cols;
    return p;
}

std::string emit_polygon_csv(const Polygon& p) {
    std::string out = p.dim == 3 ? "x,y,z\n" : "x,y\n";
    for (const auto& pt : p.points) {
        out += format_float(pt[0]);
        out += ',';
        out += format_float(pt[1]);
        if (p.dim == 3) {
            out += ',';
            out += format_float(pt[2]);
        }
        out += '\n';
    }
    return out;
}

std::string emit_svg(const Polygon& p) {
    if (p.points.size() < 2) bad("svg: need at least two points");
    double xmin = p.points[0][0], xmax = xmin, ymin = p.points[0][1], ymax = ymin;
    for (const auto& pt : p.points) {
        xmin = std::min(xmin, pt[0]);
        xmax = std::max(xmax, pt[0]);
        ymin = std::min(ymin, pt[1]);
        ymax = std::max(ymax, pt[1]);
    }
    double w = xmax - xmin, h = ymax - ymin;
    double pad = 0.05 * std::max({w, h, 1e-9});
    xmin -= pad;
    ymin -= pad;
    w += 2 * pad;
    h += 2 * pad;
    std::string d;
    for (size_t i = 0; i < p.points.size(); ++i) {
        d += (i == 0) ? "M " : " L ";
        d += format_float(p.points[i][0]);
        d += ' ';
        // svg y grows downward; flip about the viewBox midline
        d += format_float(2 * ymin + h - p.points[i][1]);
    }
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"";
    out += format_float(xmin);
    out += ' ';
    out += format_float(ymin);
    out += ' ';
    out += format_float(w);
    out += ' ';
    out += format_float(h);
    out += "\">\n  <path fill=\"none\" stroke=\"black\" stroke-width=\"";
    out += format_float(0.006 * std::max(w, h));
    out += "\" d=\"";
    out += d;
    out += "\"/>\n</svg>\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad("cannot write file: " + path);
    out << text;
}

}  // namespace subdivkit::io
