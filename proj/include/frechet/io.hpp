#pragma once

#include <string>
#include <vector>

#include "frechet/mclab.hpp"
#include "frechet/tree.hpp"

namespace frechet {

/// Input errors carrying the offending file/row.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Point CSV, one point per row: euclidean d columns; sphere/hyperbolic d+1
/// ambient columns; SPD d^2 row-major columns; tree `edge_id,offset`.
/// Rows failing the membership predicate are reported with their line number.
std::vector<Point> read_points_csv(const Space& space, const std::string& path);
void write_points_csv(const Space& space, const std::vector<Point>& points,
                      const std::string& path);

/// Edge-list CSV `node_a,node_b,length` (header optional).
MetricTree read_tree_csv(const std::string& path);
void write_tree_csv(const MetricTree& tree, const std::string& path);

/// Results CSV with the fixed column order
/// experiment_id,space,kappa,epsilon,estimator,n,replicates,mse,mse_stderr,
/// q50,q90,q99,exp_bound,tail_bound,delta,exceedance,flags,seed.
void write_results_csv(const std::vector<SummaryRow>& rows, const std::string& path);
std::string results_csv_string(const std::vector<SummaryRow>& rows);

/// 12-significant-digit numeric formatting used for all emitted values.
std::string format_value(double v);

/// Experiment description in the documented JSON schema. Schema violations
/// raise IoError with the offending field path.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace frechet
