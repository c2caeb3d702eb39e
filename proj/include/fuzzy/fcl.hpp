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

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzy/fcl/diagnostic.hpp"
#include "fuzzy/fcl/lexer.hpp"
#include "fuzzy/fcl/linker.hpp"
#include "fuzzy/fcl/parser.hpp"
#include "fuzzy/fcl/printer.hpp"
#include "fuzzy/rulebase.hpp"

namespace fuzzy::fcl {

struct SourceFile {
    std::string name;
    std::string text;
};

struct ParseResult {
    std::optional<RuleBase> rulebase;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return rulebase.has_value(); }
};

/// Parses and links several sources as one rule base, so a knowledge base
/// can be split into one file per concern. Linking only runs once the
/// sources are free of lexical and syntax errors.
inline ParseResult parse_fcl(std::span<const SourceFile> sources) {
    std::vector<std::string> names;
    for (const auto& s : sources) names.push_back(s.name);
    DiagnosticSink sink(names);

    std::vector<Token> tokens;
    SourceLoc end{};
    for (std::size_t i = 0; i < sources.size(); ++i) {
        Lexer lexer(sources[i].text, i, sink);
        auto toks = lexer.run();
        tokens.insert(tokens.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
        end = lexer.end_loc();
    }
    Token eof;
    eof.loc = end;
    tokens.push_back(eof);

    Parser parser(std::move(tokens), sink);
    ast::File file = parser.parse();

    ParseResult result;
    if (!sink.has_errors()) {
        Linker linker(sink);
        std::string source_name = names.empty() ? std::string{} : names.front();
        for (std::size_t i = 1; i < names.size(); ++i) source_name += ',' + names[i];
        result.rulebase = linker.link(file, source_name);
    }
    result.diagnostics = sink.take();
    return result;
}

inline ParseResult parse_fcl(std::string_view source, std::string source_name = "<input>") {
    SourceFile file{std::move(source_name), std::string(source)};
    return parse_fcl(std::span<const SourceFile>(&file, 1));
}

/// Thrown when a source file cannot be read.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline SourceFile read_source(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw io_error(path.string() + ": file not found");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return {path.string(), buf.str()};
}

inline ParseResult parse_fcl_files(std::span<const std::filesystem::path> paths) {
    std::vector<SourceFile> sources;
    for (const auto& p : paths) sources.push_back(read_source(p));
    return parse_fcl(sources);
}

}  // namespace fuzzy::fcl
