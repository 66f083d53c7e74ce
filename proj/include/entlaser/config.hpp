#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "entlaser/entanglement.hpp"
#include "entlaser/params.hpp"

namespace entlaser {

enum class InitialKind { Vacuum, Coherent, Moments };

struct InitialSpec {
  InitialKind kind = InitialKind::Vacuum;
  cplx beta1{}, beta2{};  ///< coherent amplitudes
  MomentState moments;    ///< explicit moments

  MomentState state() const;
};

enum class OutputFormat { Csv, Json };

struct SimSpec {
  double t_max = 0.0;
  std::size_t samples = 2000;
  SimMethod method = SimMethod::Spectral;
  double dominance = kDefaultDominance;
};

struct OutputSpec {
  std::string path = "-";  ///< "-" is stdout
  OutputFormat format = OutputFormat::Csv;
};

struct RunConfig {
  PhysicalParams params;
  InitialSpec initial;
  SimSpec sim;
  OutputSpec output;
};

/// section -> key -> raw value
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

/// Parses `[section]` headers and `key = value` lines; `#` and `;` start
/// comments. Errors name the line.
ConfigSections parse_config_text(std::string_view text);

/// Applies `section.key=value` overrides on top of parsed sections.
void apply_override(ConfigSections& sections, std::string_view assignment);

/// Builds and validates a RunConfig. Every PhysicalParams field and
/// sim.t_max are required; a missing set is reported in one message.
RunConfig config_from_sections(const ConfigSections& sections);

RunConfig load_config_file(const std::filesystem::path& path);

/// Reads a number; also accepts multiples of pi such as `pi/2`, `-pi`,
/// `3*pi/2` or `0.5pi`.
double parse_number(std::string_view text, std::string_view field);

std::filesystem::path default_preset_directory();
std::vector<std::string> preset_names(const std::filesystem::path& dir = default_preset_directory());
ConfigSections load_preset_sections(std::string_view name,
                                    const std::filesystem::path& dir = default_preset_directory());
RunConfig load_preset(std::string_view name,
                      const std::filesystem::path& dir = default_preset_directory());

std::string_view to_string(InitialKind k);
std::string_view to_string(OutputFormat f);

}  // namespace entlaser
