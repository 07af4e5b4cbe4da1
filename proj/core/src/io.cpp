#include "pumpshape/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pumpshape/errors.hpp"

namespace pumpshape {

namespace {

using nlohmann::json;

void ensure_parent(const std::filesystem::path& path) {
    const auto parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(path.string() + ": " + e.what());
    }
}

void save_json(const std::filesystem::path& path, const json& j) {
    ensure_parent(path);
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace

void write_csv_matrix(const std::filesystem::path& path, const std::vector<double>& values, int n) {
    if (values.size() != static_cast<std::size_t>(n) * n) {
        throw std::logic_error("write_csv_matrix: size mismatch");
    }
    ensure_parent(path);
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path.string());
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            if (ix) out << ',';
            out << format_full(values[static_cast<std::size_t>(iy) * n + ix]);
        }
        out << '\n';
    }
}

std::vector<double> read_csv_matrix(const std::filesystem::path& path, int& n_out) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    int rows = 0;
    int cols = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int c = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            const std::string cell = line.substr(pos, next - pos);
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                std::ostringstream msg;
                msg << path.string() << ": row " << rows + 1 << ", column " << c + 1
                    << ": not a number: '" << cell << "'";
                throw config_error(msg.str());
            }
            ++c;
            pos = next + 1;
        }
        if (cols < 0) {
            cols = c;
        } else if (c != cols) {
            std::ostringstream msg;
            msg << path.string() << ": row " << rows + 1 << " has " << c << " columns, expected " << cols;
            throw config_error(msg.str());
        }
        ++rows;
    }
    if (rows == 0 || rows != cols) {
        std::ostringstream msg;
        msg << path.string() << ": expected a square matrix, got " << rows << "x" << (cols < 0 ? 0 : cols);
        throw config_error(msg.str());
    }
    n_out = rows;
    return values;
}

void write_pgm(const std::filesystem::path& path, const std::vector<double>& values, int n) {
    if (values.size() != static_cast<std::size_t>(n) * n) {
        throw std::logic_error("write_pgm: size mismatch");
    }
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write " + path.string());
    double peak = 0.0;
    for (double v : values) peak = std::max(peak, v);
    out << "P5\n" << n << " " << n << "\n255\n";
    std::vector<unsigned char> row(n);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double v = values[static_cast<std::size_t>(iy) * n + ix];
            const double scaled = peak > 0.0 ? 255.0 * std::clamp(v / peak, 0.0, 1.0) : 0.0;
            row[ix] = static_cast<unsigned char>(std::lround(scaled));
        }
        out.write(reinterpret_cast<const char*>(row.data()), n);
    }
}

void export_diffuser(const DiffuserMap& d, const std::filesystem::path& csv_path,
                     const std::filesystem::path& json_path) {
    write_csv_matrix(csv_path, d.h, d.grid.n());
    json sidecar = {
        {"n", d.grid.n()},
        {"pitch", d.grid.pitch()},
        {"n_index", d.n_index},
        {"corr_length", d.corr_length},
        {"rms_height", d.rms_height},
        {"seed", d.seed},
    };
    save_json(json_path, sidecar);
}

DiffuserMap import_diffuser(const std::filesystem::path& csv_path, const std::filesystem::path& json_path) {
    const json sidecar = load_json(json_path);
    for (const char* key : {"n", "pitch", "n_index", "corr_length", "rms_height", "seed"}) {
        if (!sidecar.contains(key)) {
            throw config_error(json_path.string() + ": missing field '" + key + "'");
        }
    }
    int n = 0;
    std::vector<double> h = read_csv_matrix(csv_path, n);
    if (n != sidecar["n"].get<int>()) {
        std::ostringstream msg;
        msg << csv_path.string() << ": matrix is " << n << "x" << n << " but sidecar says "
            << sidecar["n"].get<int>();
        throw config_error(msg.str());
    }
    Grid grid(n, sidecar["pitch"].get<double>());
    return DiffuserMap{grid,
                       std::move(h),
                       sidecar["n_index"].get<double>(),
                       sidecar["corr_length"].get<double>(),
                       sidecar["rms_height"].get<double>(),
                       sidecar["seed"].get<std::uint64_t>()};
}

void export_coincidence(const CoincidenceMap& map, const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path, std::uint64_t seed) {
    write_csv_matrix(csv_path, map.values, map.grid.n());
    json sidecar = {
        {"n", map.grid.n()},
        {"pitch", map.grid.pitch()},
        {"q_i", {map.q_i.x, map.q_i.y}},
        {"q_i_steps", {map.q_i_steps.x, map.q_i_steps.y}},
        {"q_i_snapped", map.q_i_snapped},
        {"lambda_p", map.lambda_p},
        {"lambda_s", map.lambda_s},
        {"lambda_i", map.lambda_i},
        {"normalization", map.normalization},
        {"seed", seed},
    };
    save_json(json_path, sidecar);
}

void export_record(const OptimizationRecord& record, const std::filesystem::path& json_path) {
    json trace = json::array();
    for (const auto& s : record.trace) {
        trace.push_back({{"index", s.measurement_index}, {"feedback", s.feedback}, {"accepted", s.accepted}});
    }
    json j = {
        {"segments_per_side", record.segments_per_side},
        {"n_iterations", record.n_iterations},
        {"n_phase_steps", record.n_phase_steps},
        {"seed", record.seed},
        {"initial_feedback", record.initial_feedback},
        {"final_feedback", record.final_feedback},
        {"enhancement", record.enhancement},
        {"trace", std::move(trace)},
    };
    save_json(json_path, j);
}

void write_mask_csv(const PhaseMask& mask, const std::filesystem::path& path) {
    write_csv_matrix(path, mask.phases, mask.segments_per_side);
}

}  // namespace pumpshape
