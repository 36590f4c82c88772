#pragma once

#include <cstddef>
#include <cstdint>

#include "bsmguard/ml/dataset.hpp"

namespace bsmguard::ml {

/// Balances a two-class dataset towards the midpoint of the two class counts:
/// the minority class is topped up with SMOTE points and the majority class is
/// randomly under-sampled. Surviving original rows keep their relative order and
/// synthetic rows are appended. Inputs whose class counts differ by at most one
/// are returned as is.
///
/// A synthetic point is x + u * (n - x), where x is a random minority row, n one
/// of its k nearest minority neighbours (Euclidean, ties by row index) and
/// u ~ U[0, 1).
///
/// Throws InputError for single-class input or a minority class with fewer than
/// two rows, ParameterError for k == 0.
Dataset smote_balance(const Dataset& data, std::size_t k, std::uint64_t seed);

}  // namespace bsmguard::ml
