#include "swdl/touchstone.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace swdl {

namespace {

enum class NumberFormat { RI, MA, DB };

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::complex<double> decode(NumberFormat fmt, double a, double b) {
    switch (fmt) {
        case NumberFormat::RI: return {a, b};
        case NumberFormat::MA: return std::polar(a, b * std::numbers::pi / 180.0);
        case NumberFormat::DB:
            return std::polar(std::pow(10.0, a / 20.0), b * std::numbers::pi / 180.0);
    }
    throw std::logic_error("unreachable format");
}

} // namespace

TouchstoneData load_touchstone(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_touchstone: cannot open " + path);

    TouchstoneData data;
    double freq_scale = 1e9; // Touchstone default unit is GHz
    NumberFormat fmt = NumberFormat::MA;
    bool option_seen = false;

    std::string line;
    while (std::getline(in, line)) {
        const auto bang = line.find('!');
        if (bang != std::string::npos) line.erase(bang);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;

        if (first == "#") {
            if (option_seen) throw std::runtime_error("load_touchstone: duplicate option line");
            option_seen = true;
            std::string tok;
            while (ss >> tok) {
                const std::string t = upper(tok);
                if (t == "HZ") freq_scale = 1.0;
                else if (t == "KHZ") freq_scale = 1e3;
                else if (t == "MHZ") freq_scale = 1e6;
                else if (t == "GHZ") freq_scale = 1e9;
                else if (t == "S") continue;
                else if (t == "RI") fmt = NumberFormat::RI;
                else if (t == "MA") fmt = NumberFormat::MA;
                else if (t == "DB") fmt = NumberFormat::DB;
                else if (t == "R") {
                    if (!(ss >> data.z0_ohm) || !(data.z0_ohm > 0.0))
                        throw std::runtime_error("load_touchstone: bad reference impedance");
                } else
                    throw std::runtime_error("load_touchstone: unsupported option token " + tok);
            }
            continue;
        }

        std::istringstream row(line);
        double v[9];
        for (double& x : v)
            if (!(row >> x)) throw std::runtime_error("load_touchstone: expected 9 columns per row");
        double extra;
        if (row >> extra) throw std::runtime_error("load_touchstone: expected 9 columns per row");

        SampledPoint p;
        p.f_hz = v[0] * freq_scale;
        p.s.s11 = decode(fmt, v[1], v[2]);
        p.s.s21 = decode(fmt, v[3], v[4]);
        p.s.s12 = decode(fmt, v[5], v[6]);
        p.s.s22 = decode(fmt, v[7], v[8]);
        if (!data.points.empty() && !(p.f_hz > data.points.back().f_hz))
            throw std::runtime_error("load_touchstone: frequencies must strictly ascend");
        data.points.push_back(p);
    }
    if (data.points.empty()) throw std::runtime_error("load_touchstone: no data rows in " + path);
    return data;
}

void save_touchstone(const std::string& path, const TouchstoneData& data) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_touchstone: cannot open " + path);
    char buf[512];
    std::snprintf(buf, sizeof(buf), "# HZ S RI R %.17g\n", data.z0_ohm);
    out << "! two-port S-parameters\n" << buf;
    for (const auto& p : data.points) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", p.f_hz,
                      p.s.s11.real(), p.s.s11.imag(), p.s.s21.real(), p.s.s21.imag(),
                      p.s.s12.real(), p.s.s12.imag(), p.s.s22.real(), p.s.s22.imag());
        out << buf;
    }
    if (!out) throw std::runtime_error("save_touchstone: write failed for " + path);
}

} // namespace swdl
