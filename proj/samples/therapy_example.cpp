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
// Loads the shipped dyslalia knowledge base and walks one assessment through
// every inference stage.

#include <cstdio>
#include <exception>

#include "fuzzy/fuzzy.hpp"

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : FUZZYKB_DATA_DIR "/dyslalia.fcl";
    try {
        const fuzzy::RuleBase kb = fuzzy::therapy::load_kb(path);
        const fuzzy::Inputs child{
            {"speech_problems_level", 1.62},
            {"child_age", 4.5},
            {"family_implication", 2.0},
        };
        const auto ctx = fuzzy::infer(kb, child);

        for (const auto& f : ctx.fuzzified) {
            std::printf("%s (%.2f) = {", f.variable.c_str(), f.crisp);
            for (std::size_t i = 0; i < f.degrees.size(); ++i)
                std::printf("%s\"%s\"/%.2f", i ? "," : "", f.degrees[i].first.c_str(), f.degrees[i].second);
            std::printf("}\n");
        }
        for (const auto& t : ctx.trace)
            std::printf("rule %s -> %s is %s : %.2f\n", t.rule.c_str(), t.output.c_str(), t.term.c_str(),
                        t.activation);
        for (const auto& o : ctx.outputs) {
            if (!o.crisp) {
                std::printf("%s: %s\n", o.aggregate.variable().c_str(), o.error.c_str());
                continue;
            }
            std::printf("%s = %.4f -> %d session(s) per week\n", o.aggregate.variable().c_str(), *o.crisp,
                        fuzzy::therapy::discrete_sessions(*o.crisp, o.fired));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
