#include "slrt/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slrt {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& token, const std::string& context) {
    const std::string t = trim(token);
    if (t.empty()) throw std::runtime_error(context + ": empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw std::runtime_error(context + ": cannot parse number '" + t + "'");
    return v;
}

long parse_integer(const std::string& token, const std::string& context) {
    const std::string t = trim(token);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw std::runtime_error(context + ": cannot parse integer '" + t + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

Dataset read_dataset_csv(const std::string& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_header && lineno == 1) continue;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const std::string& tok : split_on(line, ','))
            row.push_back(parse_number(tok, path + ":" + std::to_string(lineno)));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no observations");

    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return Dataset(std::move(m));
}

LinearHypothesis read_hypothesis_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hypothesis file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("hypothesis file '" + path + "': " + e.what());
    }
    if (!j.contains("offset") || !j["offset"].is_array())
        throw std::runtime_error("hypothesis file '" + path + "': missing 'offset' array");
    if (!j.contains("basis") || !j["basis"].is_array())
        throw std::runtime_error("hypothesis file '" + path + "': missing 'basis' array");

    const auto& joffset = j["offset"];
    Eigen::VectorXd offset(static_cast<Eigen::Index>(joffset.size()));
    for (Eigen::Index i = 0; i < offset.size(); ++i)
        offset[i] = joffset[static_cast<std::size_t>(i)].get<double>();

    const auto& jbasis = j["basis"];
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(jbasis.size()), offset.size());
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
        const auto& jrow = jbasis[static_cast<std::size_t>(r)];
        if (!jrow.is_array() || static_cast<Eigen::Index>(jrow.size()) != offset.size())
            throw std::runtime_error("hypothesis file '" + path + "': basis row " +
                                     std::to_string(r) + " has wrong length");
        for (Eigen::Index c = 0; c < basis.cols(); ++c)
            basis(r, c) = jrow[static_cast<std::size_t>(c)].get<double>();
    }
    return LinearHypothesis(std::move(offset), std::move(basis));
}

std::vector<Eigen::Index> parse_free_coords(const std::string& text, Eigen::Index dim) {
    const std::string t = trim(text);
    std::vector<Eigen::Index> out;
    if (t.empty() || t == "none") return out;

    for (const std::string& raw : split_on(t, ',')) {
        const std::string tok = trim(raw);
        long lo, hi;
        const auto dots = tok.find("..");
        if (dots != std::string::npos) {
            lo = parse_integer(tok.substr(0, dots), "free-coords");
            hi = parse_integer(tok.substr(dots + 2), "free-coords");
        } else {
            lo = hi = parse_integer(tok, "free-coords");
        }
        if (lo > hi) throw std::runtime_error("free-coords: empty range '" + tok + "'");
        for (long c = lo; c <= hi; ++c) {
            if (c < 1 || c > static_cast<long>(dim))
                throw std::runtime_error("free-coords: coordinate " + std::to_string(c) +
                                         " outside 1.." + std::to_string(dim));
            out.push_back(static_cast<Eigen::Index>(c - 1));
        }
    }
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::runtime_error("grid: empty specification");

    if (t.find(':') != std::string::npos) {
        const auto parts = split_on(t, ':');
        if (parts.size() != 3) throw std::runtime_error("grid: expected start:stop:step");
        const double start = parse_number(parts[0], "grid");
        const double stop = parse_number(parts[1], "grid");
        const double step = parse_number(parts[2], "grid");
        if (!(step > 0.0)) throw std::runtime_error("grid: step must be > 0");
        if (stop < start - 0.5 * step) throw std::runtime_error("grid: stop is below start");
        std::vector<double> out;
        for (int k = 0;; ++k) {
            double v = start + static_cast<double>(k) * step;
            if (v > stop + 0.5 * step) break;
            // snap accumulated float error to the nearest 12-digit decimal
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.12g", v);
            v = std::strtod(buf, nullptr);
            out.push_back(v);
            if (out.size() > 1000000) throw std::runtime_error("grid: too many points");
        }
        return out;
    }

    std::vector<double> out;
    for (const std::string& tok : split_on(t, ','))
        out.push_back(parse_number(tok, "grid"));
    return out;
}

std::string cells_to_csv(const std::vector<SimCell>& cells) {
    std::ostringstream os;
    os << "# gamma = n1/n, the fraction of observations in the evaluation fold D1\n";
    os << "kind,n,d,q,delta,gamma,alpha,reps,seed,statistic,reject_rate,stderr\n";
    for (const SimCell& c : cells) {
        os << c.kind << ',' << c.spec.n << ',' << c.spec.d << ',' << c.spec.q << ','
           << format_double(c.spec.delta) << ',' << format_double(c.spec.gamma) << ','
           << format_double(c.spec.alpha) << ',' << c.spec.reps << ',' << c.spec.seed << ','
           << (c.spec.statistic == StatisticKind::plain ? "plain" : "crossfit") << ','
           << format_double(c.reject_rate) << ',' << format_double(c.std_error) << '\n';
    }
    return os.str();
}

std::string format_test_result(const TestResult& r, StatisticKind kind) {
    std::ostringstream os;
    os << "log_t=" << format_double(r.log_t) << " log_crit=" << format_double(r.log_crit)
       << " reject=" << (r.reject ? 1 : 0) << " n0=" << r.n0 << " n1=" << r.n1
       << " gamma=" << format_double(r.gamma_effective)
       << " statistic=" << (kind == StatisticKind::plain ? "plain" : "crossfit");
    if (r.guarantee_void) os << " guarantee=void";
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

void ensure_writable(const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::app);
        if (!out) throw std::runtime_error("output path '" + path + "' is not writable");
    }
    std::remove(tmp.c_str());
}

}  // namespace slrt
