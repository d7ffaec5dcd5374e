#pragma once

#include "diracwb/linalg.hpp"
#include "diracwb/superfun.hpp"

#include <map>
#include <string>
#include <vector>

namespace diracwb {

enum class ParseErrorKind {
  Lexical,
  Syntax,
  UndeclaredIdentifier,
  BidegreeMismatch,
  MissingBlock,
  Duplicate,
  Dimension,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                           ": " + msg),
        kind(kind),
        line(line),
        col(col) {}
  ParseErrorKind kind;
  int line;
  int col;
};

enum class BlockKind {
  Mu,
  Gamma,
  Phi,
  Psi,
  Bivector,
  TwoForm,
  Endo,
  Subbundle,
  Cosubbundle,
  DoubleBundle,
};

std::string to_string(BlockKind k);

struct StructureBlock {
  BlockKind kind;
  std::string name;
  Superfunction value;  // expression kinds
  PolyMat matrix;       // endo / subbundle kinds
};

struct CheckBlock {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;  // key=value, ordered
};

// A parsed structure-definition file: declarations of the coordinate symbols,
// named structure blocks, and named check invocations.
struct DefinitionFile {
  int format_version = 1;
  int base_dim = 0;
  int fiber_rank = 0;
  Names names;  // base / momenta / coframe / frame symbol names
  std::vector<StructureBlock> structures;
  std::vector<CheckBlock> checks;

  const StructureBlock* find(const std::string& name) const;
  const StructureBlock& require(const std::string& name, BlockKind kind) const;
  // The unique mu block, or the one named explicitly.
  const StructureBlock& resolve_mu(const std::string& name_or_empty) const;

  // Canonical rendering; parse(render(f)) reproduces f.
  std::string render() const;
};

DefinitionFile parse_definition(const std::string& text);

}  // namespace diracwb
