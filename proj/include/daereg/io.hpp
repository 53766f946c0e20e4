#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "daereg/dae.hpp"
#include "daereg/models.hpp"
#include "daereg/onecm.hpp"
#include "daereg/transform.hpp"

namespace daereg {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Name resolution for s-expression parsing. Canonical tokens xJ always work;
// declared display names take precedence.
struct SymbolTable {
    std::vector<std::string> variables;
    std::vector<std::string> parameters;
    std::vector<std::string> functions;
};

Expr parse_sexpr(const std::string& text, const SymbolTable* table = nullptr);

// DaeFile JSON document (schema 1): variables, parameters, functions,
// equations as s-expression strings, optional decomposition hints.
DaeSystem dae_from_json(const nlohmann::json& j);
nlohmann::json dae_to_json(const DaeSystem& dae);

// Optional "decomposition" member: coefficient grids A_0..A_k plus g.
std::optional<std::pair<std::vector<RatMatrix>, std::vector<Expr>>> decomposition_from_json(
    const nlohmann::json& j, const DaeSystem& dae);

nlohmann::json ratmatrix_to_json(const RatMatrix& m);
RatMatrix ratmatrix_from_json(const nlohmann::json& j);

// A0 as nested "p/q" strings, atoms as s-expressions, 1CM factors as
// (symbol, b, c) triples.
nlohmann::json lsm_to_json(const LinSymMatrix& l);
nlohmann::json onecm_to_json(const OneCMMatrix& a);

nlohmann::json pair_to_json(const VanishingPair& vp);
VanishingPair pair_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const RegularizationResult& res, const std::string& input_name);

// Presets: robot:N=<k>, transamp, ringmod, toy, mna; anything else is read
// as a DaeFile path.
struct LoadedInput {
    std::string name;
    DaeSystem dae;
    std::optional<std::pair<std::vector<RatMatrix>, std::vector<Expr>>> decomposition;
};
LoadedInput load_input(const std::string& spec);

}  // namespace daereg
