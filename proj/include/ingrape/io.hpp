#ifndef INGRAPE_IO_HPP
#define INGRAPE_IO_HPP

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "ingrape/landscape.hpp"

namespace ingrape {

// Shortest round-trippable decimal form; locale-independent.
std::string format_double(double x);

// t, Re/Im of all density-matrix entries (row-major), plus r_x,r_y,r_z for
// dim-2 systems.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const TimeGrid& grid);

// iteration,value,grad_norm,step
void write_history_csv(std::ostream& os, const RunResult& run);

// run_index,seed,final_value,iterations,flag  (in run-index order)
void write_values_csv(std::ostream& os, const LandscapeResult& result);

// bin_left,bin_right,count
void write_histogram_csv(std::ostream& os, const LandscapeResult& result);

// epsilon,mean,std
void write_robustness_csv(std::ostream& os, const RobustnessReport& report);

nlohmann::json clusters_to_json(const LandscapeResult& result);

nlohmann::json controls_to_json(const PWCControls& controls);
PWCControls controls_from_json(const nlohmann::json& doc);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace ingrape

#endif
