#pragma once

#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dimgroup/cone.hpp"
#include "dimgroup/element.hpp"
#include "dimgroup/error.hpp"
#include "dimgroup/oracle.hpp"
#include "dimgroup/poset.hpp"
#include "dimgroup/riesz.hpp"

namespace dimgroup::cli {

/// Poset file: `elem <name>...` declares elements, `lt <lo> <hi>` adds lo < hi,
/// `#` starts a comment, blank lines are ignored. Names in `lt` lines must
/// already be declared.
inline Poset parse_poset_file(std::string_view text) {
  std::vector<std::string> names;
  std::unordered_set<std::string> declared;
  std::vector<std::pair<std::string, std::string>> relations;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(number) + ": ";
    for (std::size_t t = 1; t < tokens.size(); ++t)
      if (!is_valid_element_name(tokens[t])) throw Error(ErrorCode::Syntax, where + "malformed element name '" + tokens[t] + "'");
    if (tokens[0] == "elem") {
      if (tokens.size() < 2) throw Error(ErrorCode::Syntax, where + "'elem' needs at least one name");
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        if (!declared.insert(tokens[t]).second)
          throw Error(ErrorCode::DuplicateElement, where + "duplicate element '" + tokens[t] + "'");
        names.push_back(tokens[t]);
      }
    } else if (tokens[0] == "lt") {
      if (tokens.size() != 3) throw Error(ErrorCode::Syntax, where + "'lt' needs exactly two names");
      for (std::size_t t = 1; t < 3; ++t)
        if (!declared.count(tokens[t]))
          throw Error(ErrorCode::UnknownElement, where + "'" + tokens[t] + "' is not declared");
      relations.emplace_back(tokens[1], tokens[2]);
    } else {
      throw Error(ErrorCode::Syntax, where + "unknown directive '" + tokens[0] + "'");
    }
  }
  return Poset::build(names, relations);
}

inline Poset load_poset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_poset_file(buffer.str());
}

using Json = nlohmann::ordered_json;

/// What a command produced: exit code, the text form and the JSON payload.
struct Outcome {
  int exit_code = 0;
  std::string text;
  Json result;
  Json witness;
};

namespace detail {

inline int verdict_code(bool v) { return v ? 0 : 1; }

inline Outcome verdict(bool v) { return {verdict_code(v), v ? "true\n" : "false\n", v, nullptr}; }

inline Json matrix_json(const RefinementMatrix& z) {
  return Json{{"z11", format_expr(z.z11)}, {"z12", format_expr(z.z12)}, {"z21", format_expr(z.z21)}, {"z22", format_expr(z.z22)}};
}

}  // namespace detail

/// Runs one command line (without the program name). Writes results to `out`
/// and diagnostics to `err`; returns 0 (success or true), 1 (false verdict),
/// or 2 (any error).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ordered free abelian groups over finite posets"};
  app.name("dimgroup");
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Print a single JSON document on standard output");

  std::string file;
  std::vector<std::string> exprs;

  auto* poset = app.add_subcommand("poset", "Poset queries");
  poset->require_subcommand(1);
  auto* poset_check = poset->add_subcommand("check", "Validate a poset file");
  poset_check->add_option("FILE", file)->required();
  auto* poset_maximal = poset->add_subcommand("maximal", "Print the maximal elements");
  poset_maximal->add_option("FILE", file)->required();

  auto* cone = app.add_subcommand("cone", "Positive cone and order units");
  cone->require_subcommand(1);
  auto* cone_member = cone->add_subcommand("member", "Is EXPR in the positive cone");
  cone_member->add_option("FILE", file)->required();
  cone_member->add_option("EXPR", exprs)->required()->expected(1);
  auto* cone_leq = cone->add_subcommand("leq", "Is X <= Y");
  cone_leq->add_option("FILE", file)->required();
  cone_leq->add_option("EXPRS", exprs)->required()->expected(2);
  auto* cone_unit = cone->add_subcommand("unit", "Canonical order unit, or test EXPR");
  cone_unit->add_option("FILE", file)->required();
  cone_unit->add_option("EXPR", exprs)->expected(0, 1);

  auto* riesz = app.add_subcommand("riesz", "Refinement and interpolation");
  riesz->require_subcommand(1);
  auto* riesz_refine = riesz->add_subcommand("refine", "Refine X1 + X2 = Y1 + Y2");
  riesz_refine->add_option("FILE", file)->required();
  riesz_refine->add_option("EXPRS", exprs, "X1 X2 Y1 Y2")->required()->expected(4);
  auto* riesz_interpolate = riesz->add_subcommand("interpolate", "Interpolate between X1, X2 and Y1, Y2");
  riesz_interpolate->add_option("FILE", file)->required();
  riesz_interpolate->add_option("EXPRS", exprs, "X1 X2 Y1 Y2")->required()->expected(4);

  auto* verify = app.add_subcommand("verify", "Run the verification suites");
  oracle::VerifyOptions vopt;
  verify->add_option("--max-n", vopt.max_n)->required();
  verify->add_option("--coeff-bound", vopt.coeff_bound)->required();
  verify->add_option("--samples", vopt.samples);
  verify->add_option("--seed", vopt.seed);
  bool exhaustive = false;
  verify->add_flag("--exhaustive", exhaustive, "Never sample; check every instance");

  // CLI11 reads "-a" as a short flag. The only short flag is -h, so any other
  // single-dash word is an expression; it is shielded during parsing.
  constexpr char kShield = '\x1f';
  std::vector<std::string> reversed;
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    const bool expression = it->size() > 1 && (*it)[0] == '-' && (*it)[1] != '-' && *it != "-h";
    reversed.push_back(expression ? kShield + *it : *it);
  }
  auto unshield = [&](std::string& s) {
    if (!s.empty() && s[0] == kShield) s.erase(0, 1);
  };
  try {
    app.parse(reversed);
    unshield(file);
    for (auto& e : exprs) unshield(e);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_tag(ErrorCode::Usage) << ": " << e.what() << "\n";
    return 2;
  }

  std::string command;
  for (const CLI::App* level = &app; !level->get_subcommands().empty();) {
    level = level->get_subcommands().front();
    command += (command.empty() ? "" : " ") + level->get_name();
  }

  auto emit_error = [&](std::string_view tag, const std::string& message) {
    err << tag << ": " << message << "\n";
    if (json) {
      Json doc{{"ok", false}, {"command", command}, {"result", nullptr}, {"witness", nullptr},
               {"error", Json{{"code", tag}, {"message", message}}}};
      out << doc.dump() << "\n";
    }
    return 2;
  };

  Outcome outcome;
  try {
    if (poset_check->parsed()) {
      const Poset p = load_poset_file(file);
      outcome.text = "elements: " + std::to_string(p.size()) + "\nrelation_size: " + std::to_string(p.relation_size()) + "\n";
      outcome.result = Json{{"elements", p.size()}, {"relation_size", p.relation_size()}};
    } else if (poset_maximal->parsed()) {
      const Poset p = load_poset_file(file);
      Json names = Json::array();
      std::string line;
      for (auto i : p.canonical_cofinal()) {
        line += (line.empty() ? "" : " ") + p.name(i);
        names.push_back(p.name(i));
      }
      outcome.text = line + "\n";
      outcome.result = names;
    } else if (cone_member->parsed()) {
      const Poset p = load_poset_file(file);
      outcome = detail::verdict(in_cone(parse_expr(p, exprs.at(0))));
    } else if (cone_leq->parsed()) {
      const Poset p = load_poset_file(file);
      outcome = detail::verdict(leq(parse_expr(p, exprs.at(0)), parse_expr(p, exprs.at(1))));
    } else if (cone_unit->parsed()) {
      const Poset p = load_poset_file(file);
      if (exprs.empty()) {
        const std::string u = format_expr(canonical_order_unit(p));
        outcome.text = u + "\n";
        outcome.result = u;
      } else {
        const auto cert = is_order_unit(parse_expr(p, exprs.at(0)));
        outcome = detail::verdict(cert.has_value());
        if (cert) {
          Json witness = Json::object();
          for (const auto& w : cert->witnesses) {
            outcome.text += "witness " + p.name(w.element) + " " + std::to_string(w.multiple) + "\n";
            witness[p.name(w.element)] = w.multiple;
          }
          outcome.witness = witness;
        }
      }
    } else if (riesz_refine->parsed()) {
      const Poset p = load_poset_file(file);
      const RefinementProblem prob(parse_expr(p, exprs.at(0)), parse_expr(p, exprs.at(1)), parse_expr(p, exprs.at(2)),
                                   parse_expr(p, exprs.at(3)));
      const RefinementMatrix z = refine(prob);
      for (const GroupElement* e : {&z.z11, &z.z12, &z.z21, &z.z22}) outcome.text += format_expr(*e) + "\n";
      outcome.result = detail::matrix_json(z);
    } else if (riesz_interpolate->parsed()) {
      const Poset p = load_poset_file(file);
      const GroupElement z = interpolate(parse_expr(p, exprs.at(0)), parse_expr(p, exprs.at(1)),
                                         parse_expr(p, exprs.at(2)), parse_expr(p, exprs.at(3)));
      outcome.text = format_expr(z) + "\n";
      outcome.result = format_expr(z);
    } else if (verify->parsed()) {
      if (exhaustive) vopt.exhaustive_limit = std::numeric_limits<std::uint64_t>::max();
      const auto reports = oracle::verify_theorems(vopt);
      bool passed = true;
      Json list = Json::array();
      for (const auto& r : reports) {
        outcome.text += r.to_json_line() + "\n";
        list.push_back(r.to_json());
        passed = passed && r.passed();
      }
      outcome.exit_code = detail::verdict_code(passed);
      outcome.result = list;
    }
  } catch (const Error& e) {
    return emit_error(error_tag(e.code()), e.what());
  } catch (const std::exception& e) {
    return emit_error(error_tag(ErrorCode::InternalInvariantViolation), e.what());
  }

  if (json) {
    Json doc{{"ok", true}, {"command", command}, {"result", outcome.result}, {"witness", outcome.witness}};
    out << doc.dump() << "\n";
  } else {
    out << outcome.text;
  }
  return outcome.exit_code;
}

}  // namespace dimgroup::cli
