#ifndef SWITCHGAME_IO_HPP
#define SWITCHGAME_IO_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "switchgame/closedform.hpp"
#include "switchgame/model.hpp"

namespace switchgame {

/// Problem files are a single JSON document mirroring the GameSpec fields:
///   drift, vol (2x2 row-major, row = player I regime), discount, gamma,
///   cost_max {c12, c21}, cost_min {chi12, chi21}, x0.
/// Unknown keys are rejected so typos fail loudly.
GameSpec spec_from_json(const nlohmann::json& doc);
GameSpec load_spec(const std::string& path);
nlohmann::json spec_to_json(const GameSpec& spec);

nlohmann::json solution_to_json(const Solution& sol);
Solution solution_from_json(const nlohmann::json& doc);
Solution load_solution(const std::string& path);
void save_solution(const Solution& sol, const std::string& path);

/// Full-precision scientific formatting (17 significant digits) so CSV
/// output diffs exactly.
std::string format_full(double v);

/// RFC-4180 CSV with a header row and LF line endings.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& values);

private:
    std::ofstream out_;
};

}  // namespace switchgame

#endif
