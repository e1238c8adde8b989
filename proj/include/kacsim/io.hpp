#ifndef KACSIM_IO_HPP
#define KACSIM_IO_HPP

#include <string>
#include <vector>

#include "kacsim/fixedpoint.hpp"
#include "kacsim/initial_data.hpp"
#include "kacsim/kernel.hpp"
#include "kacsim/montecarlo.hpp"
#include "kacsim/trees.hpp"

namespace kacsim {

// JSON configuration for kernel specs and initial laws (schemas in the README).
KernelSpec kernel_from_json(const std::string& json_text);
std::string kernel_to_json(const KernelSpec& spec);

InitialLaw law_from_json(const std::string& json_text);
std::string law_to_json(const InitialLaw& law);

std::string validation_report_to_json(const ValidationReport& report);

// One value per line, full precision; metadata lands in <path>.meta.json.
void write_batch_csv(const std::string& path, const SampleBatch& batch);
SampleBatch read_batch_csv(const std::string& path);

void write_mixing_csv(const std::string& path, const MixingLaw& mixing);
MixingLaw read_mixing_csv(const std::string& path);

// Columns: size, M, M_tilde, beta_max, i_1..i_N.
void write_tree_stats_csv(const std::string& path, const std::vector<TreeStatsRow>& rows,
                          int n_children);

const char* library_version();

}  // namespace kacsim

#endif
