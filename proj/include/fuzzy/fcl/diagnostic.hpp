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

#include <cstddef>
#include <string>
#include <vector>

namespace fuzzy::fcl {

/// Position in one of the sources being parsed. Lines and columns are
/// 1-based; columns count bytes.
struct SourceLoc {
    int line = 1;
    int column = 1;
    std::size_t file = 0;

    friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    int line = 1;
    int column = 1;
    std::string file;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// `file:line:column: error: message`
inline std::string to_string(const Diagnostic& d) {
    std::string out = d.file.empty() ? std::string("<input>") : d.file;
    out += ':' + std::to_string(d.line) + ':' + std::to_string(d.column) + ": ";
    out += d.severity == Severity::Error ? "error: " : "warning: ";
    out += d.message;
    return out;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

/// Collects diagnostics, translating file indices to names.
class DiagnosticSink {
public:
    explicit DiagnosticSink(std::vector<std::string> files) : files_(std::move(files)) {}

    void error(SourceLoc loc, std::string msg) { add(Severity::Error, loc, std::move(msg)); }
    void warning(SourceLoc loc, std::string msg) { add(Severity::Warning, loc, std::move(msg)); }

    bool has_errors() const { return error_count_ > 0; }
    std::size_t error_count() const { return error_count_; }
    const std::vector<Diagnostic>& diagnostics() const { return diags_; }
    std::vector<Diagnostic> take() { return std::move(diags_); }

private:
    void add(Severity sev, SourceLoc loc, std::string msg) {
        std::string file = loc.file < files_.size() ? files_[loc.file] : std::string{};
        diags_.push_back({sev, std::move(msg), loc.line, loc.column, std::move(file)});
        if (sev == Severity::Error) ++error_count_;
    }

    std::vector<std::string> files_;
    std::vector<Diagnostic> diags_;
    std::size_t error_count_ = 0;
};

}  // namespace fuzzy::fcl
