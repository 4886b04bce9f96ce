// Copyright 2026 The qkernel-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file serialization.hpp
 * @brief JSON documents for datasets, Gram matrices, models and study
 *        results, plus flat CSV tables for plotting.
 *
 * Every document carries `format_version` ("major.minor") and `kind`.
 * Readers reject a different major version or an unexpected kind. Doubles
 * are written in shortest round-trip form, so write -> read is value-exact.
 */

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qkl/data.hpp"
#include "qkl/experiment.hpp"
#include "qkl/kernel.hpp"
#include "qkl/resources.hpp"
#include "qkl/svm.hpp"

namespace qkl {

inline constexpr std::string_view kFormatVersion = "1.0";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view psd_policy_name(PsdPolicy p);
PsdPolicy parse_psd_policy(std::string_view s);

// Each writer emits one JSON document followed by a newline.

void write_dataset(std::ostream& os, const Dataset& ds);
Dataset read_dataset(std::istream& is);

void write_kernel(std::ostream& os, const GramMatrix& g);
GramMatrix read_kernel(std::istream& is);

void write_model(std::ostream& os, const SvmModel& m);
SvmModel read_model(std::istream& is);

void write_sweep(std::ostream& os, const SweepResult& sr);
SweepResult read_sweep(std::istream& is);

void write_ptri(std::ostream& os, std::span<const PtriGrid> grids);
std::vector<PtriGrid> read_ptri(std::istream& is);

void write_variability(std::ostream& os, const VariabilityResult& v);
VariabilityResult read_variability(std::istream& is);

void write_resources(std::ostream& os, std::span<const ResourceReport> reports);
std::vector<ResourceReport> read_resources(std::istream& is);

/// The `kind` field of a document, after the version check.
std::string document_kind(std::istream& is);

// CSV tables.

/// F,N,kernel,trial,trial_seed,subset_fingerprint,balanced_accuracy,f1
void write_sweep_table(std::ostream& os, const SweepResult& sr);
/// method,metric,averaging,F,N,height,ptri
void write_ptri_table(std::ostream& os, std::span<const PtriGrid> grids);
/// F,N,kernel,trial,trial_seed,subset_fingerprint,balanced_accuracy,f1
void write_variability_table(std::ostream& os, const VariabilityResult& v);
/// lower,upper,count
void write_histogram_table(std::ostream& os, std::span<const HistogramBin> bins);
/// row_id,col_id,value
void write_kernel_table(std::ostream& os, const GramMatrix& g);
/// id,date,<features...>,label
void write_dataset_table(std::ostream& os, const Dataset& ds);
/// index,train_id,label,alpha
void write_model_table(std::ostream& os, const SvmModel& m);

/// Reads any document and writes its main table.
void flatten_to_table(std::istream& is, std::ostream& os);

/// Formats a double in shortest round-trip form.
std::string format_double(double v);

/// Opens `path` for reading; throws std::runtime_error("file not found: ...").
std::string read_file(const std::filesystem::path& path);
/// Writes `contents` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace qkl
