#include "ifpt/cli/json_lines.hpp"

#include <cctype>

namespace ifpt::cli {

namespace {

class Scanner {
public:
    Scanner(std::string_view text, std::map<std::string, int>& out) : text_(text), out_(out) {}

    void run() {
        skip_ws();
        value("");
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    std::string string_token() {
        std::string s;
        ++pos_; // opening quote
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                ++pos_;
                switch (text_[pos_]) {
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                case 'r': s += '\r'; break;
                case 'b': s += '\b'; break;
                case 'f': s += '\f'; break;
                case 'u': s += "\\u"; break;
                default: s += text_[pos_];
                }
            } else {
                s += text_[pos_];
            }
            ++pos_;
        }
        ++pos_; // closing quote
        return s;
    }

    void value(const std::string& pointer) {
        skip_ws();
        out_.try_emplace(pointer, line_);
        const char c = peek();
        if (c == '{') {
            ++pos_;
            skip_ws();
            if (peek() == '}') {
                ++pos_;
                return;
            }
            while (pos_ < text_.size()) {
                skip_ws();
                const int key_line = line_;
                const std::string child = pointer + "/" + escape_pointer_token(string_token());
                out_[child] = key_line;
                skip_ws();
                ++pos_; // ':'
                value(child);
                out_[child] = key_line;
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                ++pos_; // '}'
                return;
            }
        } else if (c == '[') {
            ++pos_;
            skip_ws();
            if (peek() == ']') {
                ++pos_;
                return;
            }
            for (std::size_t i = 0; pos_ < text_.size(); ++i) {
                value(pointer + "/" + std::to_string(i));
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                ++pos_; // ']'
                return;
            }
        } else if (c == '"') {
            string_token();
        } else {
            while (pos_ < text_.size()) {
                const char d = text_[pos_];
                if (d == ',' || d == '}' || d == ']' || std::isspace(static_cast<unsigned char>(d))) break;
                ++pos_;
            }
        }
    }

    std::string_view text_;
    std::map<std::string, int>& out_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

} // namespace

std::string escape_pointer_token(std::string_view token) {
    std::string out;
    for (char c : token) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

LineIndex LineIndex::build(std::string_view text) {
    LineIndex idx;
    Scanner(text, idx.lines_).run();
    return idx;
}

int LineIndex::line_of(std::string pointer) const {
    while (true) {
        if (const auto it = lines_.find(pointer); it != lines_.end()) return it->second;
        if (pointer.empty()) return 1;
        pointer.erase(pointer.rfind('/'));
    }
}

} // namespace ifpt::cli
