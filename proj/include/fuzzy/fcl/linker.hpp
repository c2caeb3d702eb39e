/*   Copyright 2026 The fuzzykb Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fuzzy/fcl/diagnostic.hpp"
#include "fuzzy/fcl/parser.hpp"
#include "fuzzy/rulebase.hpp"

namespace fuzzy::fcl {

/// Name given to the block holding rules written outside any RULEBLOCK.
inline constexpr std::string_view implicit_block_name = "main";

/// Resolves names in a syntax tree and checks the semantic rules. Returns
/// a RuleBase only when no error was reported.
class Linker {
public:
    explicit Linker(DiagnosticSink& sink) : sink_(sink) {}

    std::optional<RuleBase> link(const ast::File& file, std::string source_name) {
        collect_variables(file);
        std::vector<RuleBlock> blocks = link_blocks(file);
        finish_outputs(file);

        if (outputs_.empty()) sink_.error(SourceLoc{}, "no output variable declared");
        if (sink_.has_errors()) return std::nullopt;

        std::vector<LinguisticVariable> inputs, outputs;
        for (auto& s : inputs_) inputs.push_back(std::move(s.var));
        for (auto& s : outputs_) outputs.push_back(std::move(s.var));
        try {
            return RuleBase(file.name, std::move(inputs), std::move(outputs), std::move(blocks),
                            std::move(source_name));
        } catch (const std::invalid_argument& e) {
            // anything the checks above missed still surfaces as a diagnostic
            sink_.error(SourceLoc{}, e.what());
            return std::nullopt;
        }
    }

private:
    struct Slot {
        LinguisticVariable var;
        SourceLoc loc;
        const ast::VariableBody* body = nullptr;
        std::optional<AccumulationMethod> block_accumulation;
    };

    Slot* find_slot(std::vector<Slot>& slots, const std::string& name) {
        for (auto& s : slots)
            if (s.var.name == name) return &s;
        return nullptr;
    }

    void collect_variables(const ast::File& file) {
        for (const auto& d : file.declarations) {
            if (find_slot(inputs_, d.name) || find_slot(outputs_, d.name)) {
                sink_.error(d.loc, "variable '" + d.name + "' is already declared");
                continue;
            }
            Slot slot;
            slot.var.name = d.name;
            slot.var.role = d.output ? VariableRole::Output : VariableRole::Input;
            slot.loc = d.loc;
            (d.output ? outputs_ : inputs_).push_back(std::move(slot));
        }

        for (const auto& body : file.bodies) {
            auto& own = body.output ? outputs_ : inputs_;
            auto& other = body.output ? inputs_ : outputs_;
            std::string kind = body.output ? "DEFUZZIFY" : "FUZZIFY";
            Slot* slot = find_slot(own, body.name);
            if (!slot) {
                if (find_slot(other, body.name)) {
                    sink_.error(body.loc, "'" + body.name + "' is declared as " +
                                              (body.output ? "an input" : "an output") + "; " + kind +
                                              " does not apply");
                } else {
                    sink_.error(body.loc, kind + " for undeclared variable '" + body.name + "'");
                }
                continue;
            }
            if (slot->body) {
                sink_.error(body.loc, "duplicate " + kind + " block for '" + body.name + "'");
                continue;
            }
            slot->body = &body;
            link_terms(*slot, body);
        }

        for (auto* group : {&inputs_, &outputs_}) {
            for (auto& slot : *group) {
                if (!slot.body)
                    sink_.error(slot.loc, std::string("no ") +
                                              (slot.var.role == VariableRole::Output ? "DEFUZZIFY" : "FUZZIFY") +
                                              " block for '" + slot.var.name + "'");
            }
        }
    }

    void link_terms(Slot& slot, const ast::VariableBody& body) {
        auto& var = slot.var;
        bool shapes_ok = true;
        for (const auto& t : body.terms) {
            if (var.find_term(t.name)) {
                sink_.error(t.loc, "duplicate term '" + t.name + "' in '" + var.name + "'");
                shapes_ok = false;
                continue;
            }
            if (auto err = validate(t.shape)) {
                sink_.error(t.loc, "term '" + t.name + "': " + *err);
                shapes_ok = false;
            }
            var.terms.push_back({t.name, t.shape});
        }
        if (body.terms.empty()) {
            sink_.error(body.loc, "variable '" + var.name + "' declares no terms");
            return;
        }
        if (!shapes_ok) return;

        if (body.range) {
            var.universe = *body.range;
            var.range_declared = true;
            if (!(body.range->lo < body.range->hi)) {
                sink_.error(body.range_loc, "RANGE must satisfy lo < hi");
                return;
            }
            for (std::size_t i = 0; i < body.terms.size(); ++i) {
                auto [a, b] = anchor_span(var.terms[i].shape);
                if (a < var.universe.lo || b > var.universe.hi)
                    sink_.error(body.terms[i].loc, "term '" + var.terms[i].name + "' lies outside RANGE of '" +
                                                       var.name + "'");
            }
        } else {
            try {
                var.universe = derive_universe(var.terms);
            } catch (const std::invalid_argument& e) {
                sink_.error(body.loc, "variable '" + var.name + "': " + e.what());
            }
        }
    }

    std::vector<RuleBlock> link_blocks(const ast::File& file) {
        std::vector<RuleBlock> blocks;
        std::map<std::string, std::size_t> by_name;
        // unnamed fragments all land in one implicit block
        for (const auto& decl : file.blocks) {
            std::string name = decl.name.empty() ? std::string(implicit_block_name) : decl.name;
            auto it = by_name.find(name);
            if (it != by_name.end()) {
                if (!decl.name.empty()) {
                    sink_.error(decl.loc, "duplicate rule block '" + name + "'");
                    continue;
                }
                link_rules(blocks[it->second], decl);
                continue;
            }
            RuleBlock block;
            block.name = name;
            if (decl.and_method) block.connectives.and_method = *decl.and_method;
            if (decl.or_method) block.connectives.or_method = *decl.or_method;
            if (decl.activation) block.activation = *decl.activation;
            link_rules(block, decl);
            by_name.emplace(name, blocks.size());
            blocks.push_back(std::move(block));
        }
        return blocks;
    }

    void link_rules(RuleBlock& block, const ast::RuleBlockDecl& decl) {
        std::vector<std::size_t> touched_outputs;
        for (const auto& rd : decl.rules) {
            Rule rule;
            rule.id = rd.id ? *rd.id : std::to_string(block.rules.size() + 1);
            for (const auto& r : block.rules) {
                if (r.id == rule.id) {
                    sink_.error(rd.loc, "duplicate rule '" + rule.id + "' in block '" + block.name + "'");
                    break;
                }
            }
            rule.antecedent = map_atoms<Atom>(rd.antecedent, [&](const ast::AtomRef& a) { return resolve(a); });
            for (const auto& c : rd.consequents) {
                if (auto resolved = resolve(c)) {
                    rule.consequents.push_back(*resolved);
                    touched_outputs.push_back(resolved->variable);
                }
            }
            rule.weight = rd.weight;
            if (!(rd.weight > 0.0 && rd.weight <= 1.0))
                sink_.error(rd.weight_loc, "rule weight must lie in (0, 1]");
            block.rules.push_back(std::move(rule));
        }

        if (decl.accumulation) {
            for (auto idx : touched_outputs) {
                auto& slot = outputs_[idx];
                if (slot.block_accumulation && *slot.block_accumulation != *decl.accumulation)
                    sink_.error(decl.accumulation_loc,
                                "conflicting ACCU settings for '" + slot.var.name + "' across rule blocks");
                slot.block_accumulation = decl.accumulation;
            }
        }
    }

    Atom resolve(const ast::AtomRef& a) {
        Atom atom;
        atom.hedges = a.hedges;
        std::size_t idx = 0;
        for (; idx < inputs_.size(); ++idx)
            if (inputs_[idx].var.name == a.variable) break;
        if (idx == inputs_.size()) {
            if (find_slot(outputs_, a.variable))
                sink_.error(a.variable_loc, "'" + a.variable + "' is an output variable and cannot appear in a condition");
            else
                sink_.error(a.variable_loc, "unknown input variable '" + a.variable + "'");
            return atom;
        }
        atom.variable = idx;
        auto term = inputs_[idx].var.find_term(a.term);
        if (!term) {
            sink_.error(a.term_loc, "unknown term '" + a.term + "' for variable '" + a.variable + "'");
            return atom;
        }
        atom.term = *term;
        return atom;
    }

    std::optional<Consequent> resolve(const ast::ConsequentRef& c) {
        std::size_t idx = 0;
        for (; idx < outputs_.size(); ++idx)
            if (outputs_[idx].var.name == c.variable) break;
        if (idx == outputs_.size()) {
            if (find_slot(inputs_, c.variable))
                sink_.error(c.variable_loc, "'" + c.variable + "' is an input variable and cannot be a conclusion");
            else
                sink_.error(c.variable_loc, "unknown output variable '" + c.variable + "'");
            return std::nullopt;
        }
        auto term = outputs_[idx].var.find_term(c.term);
        if (!term) {
            sink_.error(c.term_loc, "unknown term '" + c.term + "' for variable '" + c.variable + "'");
            return std::nullopt;
        }
        return Consequent{idx, *term};
    }

    void finish_outputs(const ast::File&) {
        for (auto& slot : outputs_) {
            if (!slot.body) continue;
            const auto& body = *slot.body;
            if (!body.method) {
                sink_.error(body.loc, "missing defuzzifier: DEFUZZIFY '" + slot.var.name + "' has no METHOD");
                continue;
            }
            OutputSettings settings;
            settings.method = *body.method;
            if (body.accumulation)
                settings.accumulation = *body.accumulation;
            else if (slot.block_accumulation)
                settings.accumulation = *slot.block_accumulation;
            if (body.fallback) settings.fallback = *body.fallback;
            slot.var.output = settings;
            if (auto err = check_output_shapes(slot.var)) sink_.error(body.loc, *err);
        }
    }

    DiagnosticSink& sink_;
    std::vector<Slot> inputs_;
    std::vector<Slot> outputs_;
};

}  // namespace fuzzy::fcl
