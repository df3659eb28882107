#include "spiralflow/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spiralflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double_strict(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("trailing characters in number: '" + s + "'");
    return v;
}

}  // namespace

double parse_angle(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw ParseError("empty angle");
    std::size_t p = s.find("pi");
    if (p == std::string::npos) return parse_double_strict(s);

    std::string pre = s.substr(0, p);
    std::string post = s.substr(p + 2);
    double coef = 1.0;
    if (pre == "-")
        coef = -1.0;
    else if (pre == "+" || pre.empty())
        coef = 1.0;
    else
        coef = parse_double_strict(pre);
    double denom = 1.0;
    if (!post.empty()) {
        if (post[0] != '/') throw ParseError("malformed angle: '" + text + "'");
        denom = parse_double_strict(post.substr(1));
        if (denom == 0.0) throw ParseError("zero denominator in angle: '" + text + "'");
    }
    return coef * kPi / denom;
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

FlatConfig FlatConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    FlatConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config line without '=': " + line);
        cfg.kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

std::string FlatConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_double_strict(it->second);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out << content;
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("atomic rename failed: " + path);
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string curves_to_csv(const std::vector<CurveSample>& curves) {
    std::string out = "t,x,re_z,im_z\n";
    for (const CurveSample& c : curves) {
        for (std::size_t i = 0; i < c.xs.size(); ++i) {
            out += fmt_g17(c.t);
            out += ',';
            out += fmt_g17(c.xs[i]);
            out += ',';
            out += fmt_g17(c.zs[i].real());
            out += ',';
            out += fmt_g17(c.zs[i].imag());
            out += '\n';
        }
    }
    return out;
}

std::vector<CurveSample> curves_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,x,re_z,im_z")
        throw ParseError("bad curve CSV header");
    std::vector<CurveSample> out;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c, d;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
            !std::getline(row, c, ',') || !std::getline(row, d, ','))
            throw ParseError("bad curve CSV row: " + line);
        double t = parse_double_strict(a);
        if (out.empty() || out.back().t != t) {
            out.push_back(CurveSample{});
            out.back().t = t;
        }
        out.back().xs.push_back(parse_double_strict(b));
        out.back().zs.emplace_back(parse_double_strict(c), parse_double_strict(d));
    }
    return out;
}

std::string curves_to_json(const std::vector<CurveSample>& curves) {
    nlohmann::ordered_json root = nlohmann::ordered_json::array();
    for (const CurveSample& c : curves) {
        nlohmann::ordered_json j;
        j["t"] = c.t;
        j["x"] = c.xs;
        std::vector<double> re, im;
        re.reserve(c.zs.size());
        im.reserve(c.zs.size());
        for (Complex z : c.zs) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        j["re_z"] = re;
        j["im_z"] = im;
        root.push_back(j);
    }
    return root.dump(2) + "\n";
}

std::string curves_to_svg(const std::vector<CurveSample>& curves) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const CurveSample& c : curves)
        for (Complex z : c.zs) {
            xlo = std::min(xlo, z.real());
            xhi = std::max(xhi, z.real());
            ylo = std::min(ylo, -z.imag());
            yhi = std::max(yhi, -z.imag());
        }
    if (xlo > xhi) {
        xlo = ylo = -1.0;
        xhi = yhi = 1.0;
    }
    const double pad = 0.05 * std::max(xhi - xlo, yhi - ylo) + 1e-9;
    xlo -= pad;
    ylo -= pad;
    xhi += pad;
    yhi += pad;
    const double stroke = 0.004 * std::max(xhi - xlo, yhi - ylo);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt_g17(xlo) + " " +
           fmt_g17(ylo) + " " + fmt_g17(xhi - xlo) + " " + fmt_g17(yhi - ylo) +
           "\" preserveAspectRatio=\"xMidYMid meet\">\n";
    svg += "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" "
           "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">"
           "<path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const CurveSample& c = curves[k];
        if (c.zs.empty()) continue;
        svg += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" + fmt_g17(stroke) +
               "\"";
        if (k + 1 == curves.size()) svg += " marker-end=\"url(#arrow)\"";
        svg += " points=\"";
        for (std::size_t i = 0; i < c.zs.size(); ++i) {
            if (i) svg += ' ';
            svg += fmt_g17(c.zs[i].real()) + "," + fmt_g17(-c.zs[i].imag());
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string monodromy_to_json(const SpiralParams& params, const MonodromyData& md,
                              const ConnectionConstants& cc) {
    nlohmann::ordered_json j;
    j["theta_plus"] = params.theta_plus;
    j["theta_minus"] = params.theta_minus;
    j["mu"] = params.mu;
    j["kappa"] = md.kappa;
    j["a"] = md.a;
    j["d_sq_neg"] = cc.d_sq_neg;
    j["degenerate_d"] = cc.degenerate;
    if (cc.degenerate)
        j["phi"] = nullptr;
    else
        j["phi"] = cc.phi();
    j["s1_re"] = md.s1.real();
    j["s1_im"] = md.s1.imag();
    j["s3_re"] = md.s3.real();
    j["s3_im"] = md.s3.imag();
    return j.dump(2) + "\n";
}

std::string solution_to_json(const FlowSolution& fs) {
    const PiiSolution& sol = fs.sol;
    nlohmann::ordered_json j;
    j["theta_plus"] = fs.params.theta_plus;
    j["theta_minus"] = fs.params.theta_minus;
    j["mu"] = fs.params.mu;
    j["kappa"] = sol.md.kappa;
    j["solver"] = {{"R", sol.config.R},
                   {"L", sol.config.L},
                   {"tol", sol.config.tol},
                   {"window", {sol.config.window_lo, sol.config.window_hi}}};
    j["shoot_param"] = sol.shoot_param;
    j["fit"] = {{"d_fit", sol.fit.d_fit},
                {"phi_fit", sol.fit.phi_fit},
                {"window", {sol.fit.x_lo, sol.fit.x_hi}},
                {"rms_residual", sol.fit.rms_residual}};
    j["flow"] = {{"theta_tilde_plus", fs.theta_tilde_plus},
                 {"theta_tilde_minus", fs.theta_tilde_minus},
                 {"beta", fs.beta},
                 {"profile_shift_re", fs.profile_shift.real()},
                 {"profile_shift_im", fs.profile_shift.imag()}};
    std::vector<double> grid = sol.grid(), p, dp;
    p.reserve(grid.size());
    dp.reserve(grid.size());
    for (double x : grid) {
        p.push_back(sol.p(x));
        dp.push_back(sol.dp(x));
    }
    j["trajectory"] = {{"grid", grid}, {"p", p}, {"p_prime", dp}};
    return j.dump() + "\n";
}

std::string painleve_to_csv(const std::vector<double>& xs, const std::vector<double>& im_u) {
    std::string out = "x,im_u\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += fmt_g17(xs[i]) + "," + fmt_g17(im_u[i]) + "\n";
    return out;
}

std::string report_to_json(const VerificationReport& rep) {
    nlohmann::ordered_json j;
    j["suite"] = rep.suite_name;
    j["all_pass"] = rep.all_pass();
    j["worst_ratio"] = rep.worst_ratio;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const Check& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

std::string report_to_table(const VerificationReport& rep) {
    std::string out = "suite: " + rep.suite_name + "\n";
    std::size_t width = 8;
    for (const Check& c : rep.checks) width = std::max(width, c.name.size());
    for (const Check& c : rep.checks) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "  %-*s  %-4s  measured=%-13.6g tol=%g\n",
                      static_cast<int>(width), c.name.c_str(), c.pass ? "PASS" : "FAIL",
                      c.measured, c.tolerance);
        out += buf;
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "  worst measured/tol ratio: %.6g\n", rep.worst_ratio);
    out += buf;
    out += rep.all_pass() ? "  result: PASS\n" : "  result: FAIL\n";
    return out;
}

std::string remainder_to_csv(const RemainderReport& rep) {
    std::string out = "side,t,x,ratio\n";
    for (const RemainderRow& r : rep.plus_rows)
        out += "plus," + fmt_g17(r.t) + "," + fmt_g17(r.x) + "," + fmt_g17(r.ratio) + "\n";
    for (const RemainderRow& r : rep.minus_rows)
        out += "minus," + fmt_g17(r.t) + "," + fmt_g17(r.x) + "," + fmt_g17(r.ratio) + "\n";
    return out;
}

std::string remainder_summary_json(const RemainderReport& rep) {
    nlohmann::ordered_json j;
    j["plus"] = {{"sup", rep.sup_plus},
                 {"slope", rep.slope_plus},
                 {"n_points", rep.plus_rows.size()}};
    j["minus"] = {{"sup", rep.sup_minus},
                  {"slope", rep.slope_minus},
                  {"n_points", rep.minus_rows.size()}};
    return j.dump(2) + "\n";
}

}  // namespace spiralflow
