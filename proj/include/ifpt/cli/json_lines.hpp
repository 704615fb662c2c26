#pragma once

#include <map>
#include <string>
#include <string_view>

namespace ifpt::cli {

/// Maps JSON pointers ("/process/measure/0") to the 1-based line where the
/// value (or its key) starts. Expects syntactically valid JSON.
class LineIndex {
public:
    static LineIndex build(std::string_view text);

    /// Line of the pointer, or of its nearest indexed ancestor.
    int line_of(std::string pointer) const;

private:
    std::map<std::string, int> lines_;
};

/// JSON-pointer escaping of one reference token.
std::string escape_pointer_token(std::string_view token);

} // namespace ifpt::cli
