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

#include "qkl/metrics.hpp"

#include <stdexcept>
#include <string>

#include "qkl/diagnostics.hpp"

namespace qkl {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("confusion: " + std::to_string(y_true.size()) + " truths vs " +
                                std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw std::invalid_argument("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 1 && t != -1) || (p != 1 && p != -1))
      throw std::invalid_argument("confusion: labels must be +1 or -1");
    if (t == 1) {
      (p == 1 ? cm.tp : cm.fn) += 1;
    } else {
      (p == 1 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

double balanced_accuracy(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0 || cm.tn + cm.fp == 0)
    throw std::invalid_argument("balanced_accuracy: a truth class is absent");
  const double tpr = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  const double tnr = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  return 0.5 * (tpr + tnr);
}

double f1(const ConfusionMatrix& cm) {
  const std::size_t denom = 2 * cm.tp + cm.fp + cm.fn;
  if (denom == 0) {
    warn("f1: no positive truths or predictions; reporting 0");
    return 0.0;
  }
  return static_cast<double>(2 * cm.tp) / static_cast<double>(denom);
}

}  // namespace qkl
