// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "mcbench/davidson.hpp"
#include "mcbench/dominance.hpp"
#include "mcbench/poset.hpp"
#include "mcbench/qtext.hpp"

namespace mcbench {

/// Key order is preserved so serialized output is stable byte for byte.
using Json = nlohmann::ordered_json;

/// A poset as its element roster plus the strict pairs, by element name.
Json poset_to_json(const Poset& poset, const std::vector<std::string>& elements);

/// Inverse of poset_to_json; validates order axioms on the way in.
/// When elements_out is non-null it receives the roster.
Poset poset_from_json(const Json& j, std::vector<std::string>* elements_out = nullptr);

Json worth_table_to_json(const WorthTable& table);
WorthTable worth_table_from_json(const Json& j);

/// Composite-score parameters, optionally together with the normalization
/// bounds they are meant to be applied under (one document, so parameters
/// never travel without their scale).
Json qtext_params_to_json(const QTextParams& params,
                          const NormalizationBounds* bounds = nullptr);
QTextParams qtext_params_from_json(const Json& j,
                                   NormalizationBounds* bounds_out = nullptr);

Json tallies_to_json(const std::vector<ComparisonTally>& tallies);
std::vector<ComparisonTally> tallies_from_json(const Json& j);

/// Records as CSV text under the given schema; header is
/// instance_id,method_id,<metric columns in schema order>.
std::string records_to_csv(const std::vector<MetricRecord>& records,
                           const MetricSchema& schema);

}  // namespace mcbench
