#include "sobolnoise/evaluator.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sobolnoise/errors.hpp"

namespace sobolnoise {

std::size_t Evaluator::dimension() const { return inputs().size(); }

CoreEvaluator::CoreEvaluator(ModelSpec model, std::optional<NoiseSpec> noise)
    : model_(std::move(model)), noise_(std::move(noise)) {}

std::vector<double> CoreEvaluator::evaluate(const SampleMatrix& x, RandomStream& noise) const {
  std::vector<double> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out.push_back(noise_ ? noisy_eval(model_, x.row(r), *noise_, noise) : model_(x.row(r)));
  }
  return out;
}

std::string format_input_line(std::span<const double> row) {
  std::string line;
  char buf[32];
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (c) line += ',';
    std::snprintf(buf, sizeof buf, "%.17g", row[c]);
    line += buf;
  }
  return line;
}

std::vector<double> parse_output_lines(const std::string& text, std::size_t expected) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      throw ModelFailure("external model printed an invalid value: '" + line + "'");
    }
    out.push_back(value);
  }
  if (out.size() != expected) {
    throw ModelFailure("external model returned " + std::to_string(out.size()) +
                       " values for " + std::to_string(expected) + " inputs");
  }
  return out;
}

ExternalEvaluator::ExternalEvaluator(std::string command, std::vector<InputSpec> inputs,
                                     bool intrinsic_noise, std::optional<NoiseSpec> noise)
    : command_(std::move(command)),
      inputs_(std::move(inputs)),
      intrinsic_noise_(intrinsic_noise),
      noise_(std::move(noise)) {
  if (command_.empty()) throw ConfigError("external model command is empty");
  if (inputs_.empty()) throw ConfigError("external model needs at least one input");
  for (const auto& in : inputs_) {
    if (!(in.lower < in.upper)) throw ConfigError("input '" + in.name + "' needs lower < upper");
  }
}

namespace {

class TempFile {
 public:
  TempFile() {
    auto pattern = (std::filesystem::temp_directory_path() / "sobolnoise-XXXXXX").string();
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw ModelFailure("cannot create temporary input file");
    ::close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

}  // namespace

std::vector<double> ExternalEvaluator::evaluate(const SampleMatrix& x, RandomStream& noise) const {
  if (x.cols() != inputs_.size()) throw ShapeError("external model: wrong input width");
  TempFile input;
  {
    std::ofstream file(input.path());
    for (std::size_t r = 0; r < x.rows(); ++r) file << format_input_line(x.row(r)) << '\n';
    if (!file) throw ModelFailure("cannot write external model input");
  }
  const std::string cmd = "(" + command_ + ") < " + shell_quote(input.path());
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw ModelFailure("cannot start external model: " + command_);
  std::string output;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw ModelFailure("external model exited with failure: " + command_);
  }
  std::vector<double> values = parse_output_lines(output, x.rows());
  if (noise_) {
    for (double& v : values) v = noise_->apply(v, noise);
  }
  return values;
}

}  // namespace sobolnoise
