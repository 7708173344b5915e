#include "genfric/output.hpp"

#include "genfric/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace genfric {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string csv_header(std::size_t oscillators) {
    std::string h = "t";
    for (std::size_t i = 1; i <= oscillators; ++i) {
        h += ",x" + std::to_string(i) + ",y" + std::to_string(i);
    }
    return h + ",u,sigma,rho,h_res,energy";
}

namespace {

void append_number(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

std::vector<std::string> validate_trajectory(const OscillatorSystem& sys, const Trajectory& traj,
                                             double amplitude_bound) {
    std::vector<std::string> issues;
    const double h_scale = 1e-5 * sys.max_omega();
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const Sample& s = traj.samples[k];
        const std::string at = "sample " + std::to_string(k) + ": ";
        bool finite = std::isfinite(s.t) && std::isfinite(s.u) && std::isfinite(s.sigma) && std::isfinite(s.rho) &&
                      std::isfinite(s.hamiltonian_residual) && std::isfinite(s.energy);
        finite = finite && s.state.flat().allFinite();
        if (!finite) {
            issues.push_back(at + "non-finite value");
            continue;
        }
        if (k > 0 && !(s.t > traj.samples[k - 1].t)) {
            issues.push_back(at + "time not strictly increasing");
        }
        if (std::abs(s.u) > amplitude_bound * (1.0 + 1e-12)) {
            issues.push_back(at + "|u| exceeds the control bound");
        }
        if (std::abs(s.hamiltonian_residual) > h_scale * s.rho + 1e-300) {
            issues.push_back(at + "Hamiltonian residual above 1e-5 rho max(omega)");
        }
    }
    return issues;
}

std::string trajectory_csv(const OscillatorSystem& sys, const Trajectory& traj, int stride, double amplitude_bound) {
    if (stride < 1) {
        throw ValidationError("record stride must be >= 1");
    }
    const auto issues = validate_trajectory(sys, traj, amplitude_bound);
    if (!issues.empty()) {
        throw NumericalError("trajectory failed validation: " + issues.front() +
                             (issues.size() > 1 ? " (+" + std::to_string(issues.size() - 1) + " more)" : ""));
    }
    std::string out = csv_header(sys.size()) + "\n";
    const std::size_t n = traj.samples.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != n) {
            continue;
        }
        const Sample& s = traj.samples[k];
        append_number(out, s.t);
        for (Eigen::Index j = 0; j < s.state.flat().size(); ++j) {
            out += ',';
            append_number(out, s.state.flat()[j]);
        }
        for (double v : {s.u, s.sigma, s.rho, s.hamiltonian_residual, s.energy}) {
            out += ',';
            append_number(out, v);
        }
        out += '\n';
    }
    return out;
}

TrajectoryTable parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("malformed CSV: missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string name;
        while (std::getline(ss, name, ',')) {
            names.push_back(name);
        }
    }
    if (names.size() < 8 || (names.size() - 6) % 2 != 0) {
        throw ValidationError("malformed CSV: unexpected header '" + line + "'");
    }
    TrajectoryTable table;
    table.oscillators = (names.size() - 6) / 2;
    if (line != csv_header(table.oscillators)) {
        throw ValidationError("malformed CSV: header must be '" + csv_header(table.oscillators) + "'");
    }
    table.x.resize(table.oscillators);
    table.y.resize(table.oscillators);

    int line_no = 1;
    std::vector<double> row(names.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::size_t col = 0;
        const char* p = line.c_str();
        while (true) {
            if (col == row.size()) {
                throw ValidationError("malformed CSV: too many fields on line " + std::to_string(line_no));
            }
            char* end = nullptr;
            errno = 0;
            row[col] = std::strtod(p, &end);
            if (end == p || errno == ERANGE || !std::isfinite(row[col]) || (*end != ',' && *end != '\0')) {
                throw ValidationError("malformed CSV: bad number in column " + std::to_string(col + 1) +
                                      " on line " + std::to_string(line_no));
            }
            ++col;
            if (*end == '\0') {
                break;
            }
            p = end + 1;
        }
        if (col != row.size()) {
            throw ValidationError("malformed CSV: expected " + std::to_string(row.size()) + " fields on line " +
                                  std::to_string(line_no));
        }
        if (!table.t.empty() && !(row[0] > table.t.back())) {
            throw ValidationError("malformed CSV: time not increasing on line " + std::to_string(line_no));
        }
        table.t.push_back(row[0]);
        for (std::size_t i = 0; i < table.oscillators; ++i) {
            table.x[i].push_back(row[1 + 2 * i]);
            table.y[i].push_back(row[2 + 2 * i]);
        }
        const std::size_t base = 1 + 2 * table.oscillators;
        table.u.push_back(row[base]);
        table.sigma.push_back(row[base + 1]);
        table.rho.push_back(row[base + 2]);
        table.h_res.push_back(row[base + 3]);
        table.energy.push_back(row[base + 4]);
    }
    return table;
}

}  // namespace genfric
