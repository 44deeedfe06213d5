#pragma once

#include <string>

#include "causal/expression.hpp"
#include "causal/graph.hpp"

namespace fixtures {

std::string data_path(const std::string& file);
causal::CausalGraph load(const std::string& file);

/// Z2 < X < Z1 < Z3 < Y, the declaration order of motivating.g.
causal::TopologicalOrder motivating_derivation_order();
/// Z2 < X < Z3 < Z1 < Y.
causal::TopologicalOrder motivating_simplification_order();

causal::AtomicExpression atomic(const std::string& text);
causal::Expression expression(const std::string& text);
causal::QuotientExpression quotient(const std::string& text);

// Motivating graph
inline const char* const a1 = "sum_{X,Y} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)";
inline const char* const a1_simplified = "P(Z3|Z2) P(Z2)";
inline const char* const a2 = "sum_{X} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)";
inline const char* const a3 = "sum_{X,Z3,Y} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)";
inline const char* const a4 = "P(Z3|Z2)";
inline const char* const a5 = "P(Z1|Z2,X)";
/// The raw causal effect of X on Y, Z1, Z2, Z3.
inline const char* const motivating_effect =
    "([P(Z1|Z2,X)] [P(Z3|Z2)] [sum_{X} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)] "
    "[sum_{X,Z3,Y} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)]) / "
    "(sum_{X,Y} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2))";
inline const char* const motivating_simplified =
    "P(Z1|Z2,X) P(Z2) [sum_{X} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2)]";

// Chain graph
inline const char* const chain_input = "sum_{X,W} P(Y|X,W,Z) P(X|W) P(W)";
inline const char* const chain_simplified = "sum_{X} P(Y|X,Z) P(X)";

// Insertion graph
inline const char* const insertion_input = "sum_{Z,Y} P(Y) P(Z|Y) P(X|W,Z,Y)";
inline const char* const insertion_simplified = "sum_{Z} P(X|W,Z) P(Z)";

}  // namespace fixtures
