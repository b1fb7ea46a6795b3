#include "ingrape/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace ingrape {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const TimeGrid& grid) {
    const int dim = traj.states.front().dim();
    os << "t";
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            os << ",re_" << i << "_" << j << ",im_" << i << "_" << j;
        }
    }
    if (dim == 2) {
        os << ",r_x,r_y,r_z";
    }
    os << "\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        os << format_double(grid.dt() * static_cast<double>(k));
        const Matrix& rho = traj.states[k].matrix();
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                os << "," << format_double(rho(i, j).real()) << ","
                   << format_double(rho(i, j).imag());
            }
        }
        if (dim == 2) {
            const BlochVector r = bloch_from_density(traj.states[k]);
            os << "," << format_double(r.x()) << "," << format_double(r.y()) << ","
               << format_double(r.z());
        }
        os << "\n";
    }
}

void write_history_csv(std::ostream& os, const RunResult& run) {
    os << "iteration,value,grad_norm,step\n";
    for (std::size_t i = 0; i < run.history.size(); ++i) {
        const auto& rec = run.history[i];
        os << i << "," << format_double(rec.value) << "," << format_double(rec.grad_norm) << ","
           << format_double(rec.step) << "\n";
    }
}

void write_values_csv(std::ostream& os, const LandscapeResult& result) {
    os << "run_index,seed,final_value,iterations,flag\n";
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto& run = result.runs[i];
        os << i << "," << run.seed << "," << format_double(run.final_value) << ","
           << run.iterations_used << "," << stop_reason_name(run.converged) << "\n";
    }
}

void write_histogram_csv(std::ostream& os, const LandscapeResult& result) {
    os << "bin_left,bin_right,count\n";
    for (const auto& bin : result.histogram) {
        os << format_double(bin.left) << "," << format_double(bin.right) << "," << bin.count
           << "\n";
    }
}

void write_robustness_csv(std::ostream& os, const RobustnessReport& report) {
    os << "epsilon,mean,std\n";
    for (const auto& level : report.levels) {
        os << format_double(level.epsilon) << "," << format_double(level.mean) << ","
           << format_double(level.stddev) << "\n";
    }
}

nlohmann::json clusters_to_json(const LandscapeResult& result) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : result.clusters) {
        clusters.push_back({{"mean", c.mean}, {"count", c.count}, {"min", c.min}, {"max", c.max}});
    }
    return {{"clusters", clusters}, {"aborted", result.n_aborted}};
}

nlohmann::json controls_to_json(const PWCControls& controls) {
    nlohmann::json u = nlohmann::json::array();
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index m = 0; m < controls.u.rows(); ++m) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < controls.u.cols(); ++k) row.push_back(controls.u(m, k));
        u.push_back(std::move(row));
    }
    for (Eigen::Index m = 0; m < controls.w.rows(); ++m) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < controls.w.cols(); ++c) row.push_back(controls.w(m, c));
        w.push_back(std::move(row));
    }
    return {{"T", controls.grid.total_time}, {"M", controls.grid.intervals}, {"u", u}, {"w", w}};
}

PWCControls controls_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("T") || !doc.contains("M") || !doc.contains("u") ||
        !doc.contains("w")) {
        throw Error(ErrorCode::SchemaInvalid, "controls document requires T, M, u, w");
    }
    PWCControls controls;
    controls.grid = TimeGrid(doc.at("T").get<double>(), doc.at("M").get<int>());
    auto read = [&](const nlohmann::json& rows, const char* what) {
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(controls.grid.intervals)) {
            throw Error(ErrorCode::SchemaInvalid,
                        std::string(what) + " must have one row per interval");
        }
        const std::size_t cols = rows.empty() || !rows[0].is_array() ? 0 : rows[0].size();
        Eigen::MatrixXd m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].size() != cols) {
                throw Error(ErrorCode::SchemaInvalid, std::string(what) + " rows must be rectangular");
            }
            for (std::size_t c = 0; c < cols; ++c) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    rows[r][c].get<double>();
            }
        }
        return m;
    };
    controls.u = read(doc.at("u"), "u");
    controls.w = read(doc.at("w"), "w");
    return controls;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
    }
    os << contents;
    if (!os) {
        throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
    }
}

}  // namespace ingrape
