#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptsusy/analytic.hpp"
#include "ptsusy/closed_form.hpp"
#include "ptsusy/errors.hpp"
#include "ptsusy/grid.hpp"

namespace ptsusy::cli {

enum class Command {
  Figures,
  Spectrum,
  VerifySymmetry,
  VerifyShapeInvariance,
  VerifyFactorization,
  Gram,
  Hierarchy,
};

enum class Format { Csv, Json };

enum ExitCode : int { kPass = 0, kPhysicsFail = 1, kConfigError = 2, kNoConvergence = 3 };

std::string to_string(Command c);
std::string to_string(Format f);
/// Throws ConfigError on an unknown name.
Command parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::Spectrum;
  Variant variant = Variant::Tangent;
  double k = 1.0;
  double q = 2.0;
  int n = 1;
  int m = 4;
  std::size_t grid_size = 2001;
  int depth = 3;
  std::string strategy = "apt";
  HierarchyMode mode = HierarchyMode::FixedK;
  Format format = Format::Json;
  /// Report file, or the target directory for `figures`.  Empty: stdout / cwd.
  std::string output_path;
  double plot_ceiling = 25.0;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Throws ConfigError.
void validate(const RunConfig& cfg);

nlohmann::json config_json(const RunConfig& cfg);

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  /// "<=" or ">"
  std::string relation = "<=";
  /// Exploratory checks are reported but never fail the run.
  bool asserted = true;
  bool passed = false;
};

Check check_le(std::string name, double measured, double tolerance, bool asserted = true);
Check check_gt(std::string name, double measured, double tolerance, bool asserted = true);

struct Report {
  Command command = Command::Spectrum;
  nlohmann::json data = nlohmann::json::object();
  std::vector<Check> checks;
  /// Files written besides the report itself.
  std::vector<std::string> files;

  bool passed() const;
};

/// Shortest round-trip decimal, lowercase exponent, -0 printed as 0.
std::string format_number(double v);
/// JSON number, or the strings "nan", "inf", "-inf".
nlohmann::json json_number(double v);

/// One figure curve: closed form sampled on 2001 nodes of its open interval.
struct FigureCurve {
  std::string file;
  ClosedFormFunction f;
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<FigureCurve> figure_curves(const RunConfig& cfg);
inline constexpr std::size_t kFigureRows = 2001;

/// Header `x,re,im,clipped`; components with |value| > ceiling are clamped
/// to +-ceiling and the row is marked clipped.
std::string figure_csv(const ClosedFormFunction& f, const Grid& g, double ceiling);

/// Write through a temporary file in the same directory, then rename.
void write_atomic(const std::string& path, const std::string& contents);

Report cmd_figures(const RunConfig& cfg);
Report cmd_spectrum(const RunConfig& cfg);
Report cmd_verify_symmetry(const RunConfig& cfg);
Report cmd_verify_shape_invariance(const RunConfig& cfg);
Report cmd_verify_factorization(const RunConfig& cfg);
Report cmd_gram(const RunConfig& cfg);
Report cmd_hierarchy(const RunConfig& cfg);
Report execute(const RunConfig& cfg);

std::string render_json(const RunConfig& cfg, const Report& r);
/// `check,measured,tolerance,relation,asserted,passed`
std::string render_csv(const Report& r);

/// Full command line (without the program name).  Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptsusy::cli
