#pragma once

#include "pvk/expr.hpp"
#include "pvk/model.hpp"
#include "pvk/semilinear.hpp"

#include <string>

namespace pvk {

struct ParseError : Error {
    ParseError(const std::string& what, int line)
        : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

// Model text format, one item per line, '#' comments:
//   pvass dim=<d>
//   state <name>
//   edge <from> <to> vec=(<i1>,...,<id>) zerotest=<g>
Pvass parse_model(const std::string& text);
std::string write_model(const Pvass& m);

// Configuration literal: <state> (<n1>,...,<nd>)
Configuration parse_configuration(const std::string& text, const Pvass& m);
std::string write_configuration(const Configuration& c, const Pvass& m);

// Expression files are s-expressions over leaf sections:
//   (leaf model=<file> p=<state> q=<state> bs=(<...>) bt=(<...>))
//   (comp E1 E2)  (union E1 E2)  (star E)
// Leaf model paths are resolved against base_dir.
Expression parse_expression_file(const std::string& path);
Expression parse_expression(const std::string& text, const std::string& base_dir);

// Writes the expression to <path>, placing leaf models next to it as
// <stem>_leaf<N>.pv files.
void write_expression_file(const Expression& e, const std::string& path);

// Semilinear sets:
//   semilinear <name>
//   lin base=(...) periods=[(...),(...)]
std::pair<std::string, SemilinearSet> parse_semilinear(const std::string& text);
std::string write_semilinear(const std::string& name, const SemilinearSet& s);

// Flat witnesses, one word per line: word <edge-id>,<edge-id>,...
FlatWitness parse_flat_witness(const std::string& text);
std::string write_flat_witness(const FlatWitness& fw);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace pvk
