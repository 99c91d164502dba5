#include "varex/block_extractor.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#include "varex/errors.hpp"

namespace varex {

namespace {

// ---------------------------------------------------------------------------
// Condition expression parsing

struct Token {
    enum class Type { Ident, Number, Not, AndAnd, OrOr, LParen, RParen, Defined, Bad };
    Type type;
    std::string text;
};

bool tokenize(const std::string &text, std::vector<Token> &out) {
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            std::string ident = text.substr(start, i - start);
            out.push_back({ident == "defined" ? Token::Type::Defined : Token::Type::Ident, ident});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                ++i;
            // a trailing letter means hex, suffixes or arithmetic we do not model
            if (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                return false;
            out.push_back({Token::Type::Number, text.substr(start, i - start)});
            continue;
        }
        if (c == '!' && (i + 1 >= text.size() || text[i + 1] != '=')) {
            out.push_back({Token::Type::Not, "!"});
            ++i;
            continue;
        }
        if (c == '&' && i + 1 < text.size() && text[i + 1] == '&') {
            out.push_back({Token::Type::AndAnd, "&&"});
            i += 2;
            continue;
        }
        if (c == '|' && i + 1 < text.size() && text[i + 1] == '|') {
            out.push_back({Token::Type::OrOr, "||"});
            i += 2;
            continue;
        }
        if (c == '(') {
            out.push_back({Token::Type::LParen, "("});
            ++i;
            continue;
        }
        if (c == ')') {
            out.push_back({Token::Type::RParen, ")"});
            ++i;
            continue;
        }
        return false; // operator outside the supported grammar
    }
    return true;
}

class ConditionParser {
public:
    ConditionParser(const std::vector<Token> &tokens, const MacroTable &macros)
        : tokens_(tokens), macros_(macros) {}

    std::optional<Formula> parse() {
        auto f = parse_or();
        if (!f || pos_ != tokens_.size())
            return std::nullopt;
        return f;
    }

private:
    std::optional<Formula> parse_or() {
        auto lhs = parse_and();
        if (!lhs)
            return std::nullopt;
        std::vector<Formula> terms{*lhs};
        while (accept(Token::Type::OrOr)) {
            auto rhs = parse_and();
            if (!rhs)
                return std::nullopt;
            terms.push_back(*rhs);
        }
        return terms.size() == 1 ? terms[0] : Formula::disjunction(std::move(terms));
    }

    std::optional<Formula> parse_and() {
        auto lhs = parse_unary();
        if (!lhs)
            return std::nullopt;
        std::vector<Formula> terms{*lhs};
        while (accept(Token::Type::AndAnd)) {
            auto rhs = parse_unary();
            if (!rhs)
                return std::nullopt;
            terms.push_back(*rhs);
        }
        return terms.size() == 1 ? terms[0] : Formula::conjunction(std::move(terms));
    }

    std::optional<Formula> parse_unary() {
        if (accept(Token::Type::Not)) {
            auto f = parse_unary();
            if (!f)
                return std::nullopt;
            if (f->is_true())
                return Formula::false_const();
            if (f->is_false())
                return Formula::true_const();
            return Formula::negation(*f);
        }
        if (accept(Token::Type::LParen)) {
            auto f = parse_or();
            if (!f || !accept(Token::Type::RParen))
                return std::nullopt;
            return f;
        }
        if (accept(Token::Type::Defined)) {
            if (accept(Token::Type::LParen)) {
                auto name = accept_ident();
                if (!name || !accept(Token::Type::RParen))
                    return std::nullopt;
                return defined_test(*name);
            }
            auto name = accept_ident();
            if (!name)
                return std::nullopt;
            return defined_test(*name);
        }
        if (auto *t = peek(); t && t->type == Token::Type::Number) {
            ++pos_;
            return t->text.find_first_not_of('0') == std::string::npos ? Formula::false_const()
                                                                       : Formula::true_const();
        }
        if (auto name = accept_ident())
            return defined_test(*name); // bare identifier acts as a defined-test
        return std::nullopt;
    }

    Formula defined_test(const std::string &name) const {
        if (auto it = macros_.find(name); it != macros_.end())
            return it->second ? Formula::true_const() : Formula::false_const();
        return Formula::var(name);
    }

    const Token *peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

    bool accept(Token::Type type) {
        if (auto *t = peek(); t && t->type == type) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::optional<std::string> accept_ident() {
        if (auto *t = peek(); t && t->type == Token::Type::Ident) {
            ++pos_;
            return t->text;
        }
        return std::nullopt;
    }

    const std::vector<Token> &tokens_;
    const MacroTable &macros_;
    std::size_t pos_ = 0;
};

std::string trim(const std::string &s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_identifier(const std::string &s) {
    if (s.empty())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

} // namespace

Formula parse_cpp_condition(const std::string &text, DirectiveKind kind, const MacroTable &macros,
                            const std::regex &var_regex, Diagnostics &diag) {
    (void)var_regex; // matching vs. opaque variables is decided downstream
    const std::string body = trim(text);
    if (kind == DirectiveKind::Ifdef || kind == DirectiveKind::Ifndef) {
        if (!is_identifier(body)) {
            diag.warn("code-extractor", "unparsable #if" +
                          std::string(kind == DirectiveKind::Ifdef ? "def" : "ndef") +
                          " argument treated as true: '" + body + "'");
            return Formula::true_const();
        }
        Formula test = [&] {
            if (auto it = macros.find(body); it != macros.end())
                return it->second ? Formula::true_const() : Formula::false_const();
            return Formula::var(body);
        }();
        if (kind == DirectiveKind::Ifdef)
            return test;
        if (test.is_constant())
            return test.is_true() ? Formula::false_const() : Formula::true_const();
        return Formula::negation(test);
    }
    std::vector<Token> tokens;
    if (tokenize(body, tokens)) {
        // simplify so macro-resolved constants fold away
        if (auto f = ConditionParser(tokens, macros).parse())
            return simplify(*f);
    }
    diag.warn("code-extractor", "unparsable condition treated as true: '" + body + "'");
    return Formula::true_const();
}

namespace {

// ---------------------------------------------------------------------------
// Line scanning

struct PhysicalLine {
    std::string text;
    LineClass cls = LineClass::Blank;
    bool starts_in_comment = false;
};

std::vector<std::string> split_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r')
                current.pop_back();
            lines.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty())
        lines.push_back(std::move(current));
    return lines;
}

// Strips // and /* */ comments, tracking multi-line comment state and
// skipping string/char literals.
std::string strip_comments(const std::string &line, bool &in_comment) {
    std::string out;
    std::size_t i = 0;
    char quote = 0;
    while (i < line.size()) {
        char c = line[i];
        if (in_comment) {
            if (c == '*' && i + 1 < line.size() && line[i + 1] == '/') {
                in_comment = false;
                i += 2;
            } else {
                ++i;
            }
            continue;
        }
        if (quote) {
            out.push_back(c);
            if (c == '\\' && i + 1 < line.size()) {
                out.push_back(line[i + 1]);
                i += 2;
                continue;
            }
            if (c == quote)
                quote = 0;
            ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            quote = c;
            out.push_back(c);
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < line.size() && line[i + 1] == '/')
            break;
        if (c == '/' && i + 1 < line.size() && line[i + 1] == '*') {
            in_comment = true;
            i += 2;
            continue;
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

LineClass classify(const std::string &raw, const std::string &stripped, bool started_in_comment) {
    const std::string content = trim(stripped);
    if (!content.empty())
        return content[0] == '#' ? LineClass::Directive : LineClass::Code;
    // nothing but whitespace once comments are gone
    if (trim(raw).empty())
        return LineClass::Blank;
    (void)started_in_comment;
    return LineClass::Comment;
}

struct Frame {
    Formula parent_pc;
    std::vector<Formula> prior_conditions;
    bool else_seen = false;
    Formula condition;
    Formula pc;
    int start_line = 0;
    std::vector<CodeBlock> children;
};

Formula branch_exclusion(const std::vector<Formula> &prior) {
    std::vector<Formula> negated;
    negated.reserve(prior.size());
    for (const auto &c : prior)
        negated.push_back(Formula::negation(c));
    return Formula::conjunction(std::move(negated));
}

Formula branch_pc(const Formula &parent, const std::vector<Formula> &prior, const Formula &cond) {
    return Formula::conjunction({parent, branch_exclusion(prior), cond});
}

void assign_pcs(const CodeBlock &block, std::vector<Formula> &per_line) {
    for (int l = block.start_line; l <= block.end_line; ++l)
        per_line[static_cast<std::size_t>(l - 1)] = block.presence_condition;
    for (const auto &child : block.children)
        assign_pcs(child, per_line);
}

} // namespace

std::vector<Formula> line_presence_conditions(const SourceFileBlocks &file) {
    std::vector<Formula> per_line(static_cast<std::size_t>(file.line_count),
                                  Formula::true_const());
    for (const auto &block : file.top_blocks)
        assign_pcs(block, per_line);
    return per_line;
}

SourceFileBlocks extract_blocks(const std::string &file_text, const std::string &path,
                                const ExtractOptions &options, Diagnostics &diag) {
    const std::regex var_regex(options.variable_regex);
    SourceFileBlocks result;
    result.path = path;

    std::vector<std::string> raw_lines = split_lines(file_text);
    result.line_count = static_cast<int>(raw_lines.size());
    result.line_classes.resize(raw_lines.size(), LineClass::Blank);

    // classification pass with comment-state tracking
    std::vector<std::string> stripped(raw_lines.size());
    bool in_comment = false;
    for (std::size_t i = 0; i < raw_lines.size(); ++i) {
        bool started = in_comment;
        stripped[i] = strip_comments(raw_lines[i], in_comment);
        result.line_classes[i] = classify(raw_lines[i], stripped[i], started);
    }

    MacroTable macros;
    std::vector<Frame> stack;

    auto finalize_branch = [&](Frame &frame, int end_line) {
        CodeBlock block{frame.condition, frame.pc, frame.start_line, end_line,
                        std::move(frame.children)};
        if (stack.size() > 1)
            stack[stack.size() - 2].children.push_back(std::move(block));
        else
            result.top_blocks.push_back(std::move(block));
    };

    for (std::size_t i = 0; i < raw_lines.size(); ++i) {
        if (result.line_classes[i] != LineClass::Directive)
            continue;
        // join backslash continuations into one logical directive
        std::string logical = stripped[i];
        int line_no = static_cast<int>(i) + 1;
        while (!trim(logical).empty() && trim(logical).back() == '\\' && i + 1 < raw_lines.size()) {
            logical = trim(logical);
            logical.pop_back();
            ++i;
            result.line_classes[i] = LineClass::Directive;
            logical += " " + stripped[i];
        }
        std::string body = trim(logical);
        body.erase(0, 1); // leading '#'
        body = trim(body);
        std::size_t kw_end = 0;
        while (kw_end < body.size() && std::isalpha(static_cast<unsigned char>(body[kw_end])))
            ++kw_end;
        const std::string keyword = body.substr(0, kw_end);
        const std::string rest = trim(body.substr(kw_end));

        if (keyword == "if" || keyword == "ifdef" || keyword == "ifndef") {
            DirectiveKind kind = keyword == "if"      ? DirectiveKind::If
                                 : keyword == "ifdef" ? DirectiveKind::Ifdef
                                                      : DirectiveKind::Ifndef;
            MacroTable effective = options.handle_macros ? macros : MacroTable{};
            Formula cond = parse_cpp_condition(rest, kind, effective, var_regex, diag);
            Frame frame;
            frame.parent_pc = stack.empty() ? Formula::true_const() : stack.back().pc;
            frame.condition = cond;
            frame.pc = branch_pc(frame.parent_pc, {}, cond);
            frame.start_line = line_no;
            stack.push_back(std::move(frame));
        } else if (keyword == "elif") {
            if (stack.empty() || stack.back().else_seen)
                throw UnbalancedDirectives(path, line_no);
            Frame &frame = stack.back();
            finalize_branch(frame, line_no - 1);
            MacroTable effective = options.handle_macros ? macros : MacroTable{};
            Formula cond = parse_cpp_condition(rest, DirectiveKind::Elif, effective, var_regex, diag);
            frame.prior_conditions.push_back(frame.condition);
            frame.condition = cond;
            frame.pc = branch_pc(frame.parent_pc, frame.prior_conditions, cond);
            frame.start_line = line_no;
            frame.children.clear();
        } else if (keyword == "else") {
            if (stack.empty() || stack.back().else_seen)
                throw UnbalancedDirectives(path, line_no);
            Frame &frame = stack.back();
            finalize_branch(frame, line_no - 1);
            frame.prior_conditions.push_back(frame.condition);
            frame.else_seen = true;
            frame.condition = Formula::true_const();
            frame.pc = branch_pc(frame.parent_pc, frame.prior_conditions, frame.condition);
            frame.start_line = line_no;
            frame.children.clear();
        } else if (keyword == "endif") {
            if (stack.empty())
                throw UnbalancedDirectives(path, line_no);
            finalize_branch(stack.back(), line_no - 1);
            stack.pop_back();
        } else if (keyword == "define" && options.handle_macros) {
            std::size_t name_end = 0;
            while (name_end < rest.size() &&
                   (std::isalnum(static_cast<unsigned char>(rest[name_end])) || rest[name_end] == '_'))
                ++name_end;
            const std::string name = rest.substr(0, name_end);
            // function-like macros keep their defined-ness for defined() tests
            if (is_identifier(name)) {
                if (stack.empty())
                    macros[name] = true;
                else
                    diag.warn("code-extractor", path + ":" + std::to_string(line_no) +
                                  ": conditionally-guarded #define " + name + " ignored");
            }
        } else if (keyword == "undef" && options.handle_macros) {
            if (is_identifier(rest)) {
                if (stack.empty())
                    macros[rest] = false;
                else
                    diag.warn("code-extractor", path + ":" + std::to_string(line_no) +
                                  ": conditionally-guarded #undef " + rest + " ignored");
            }
        }
        // other directives (#include, #pragma, ...) carry no variability
    }
    if (!stack.empty())
        throw UnbalancedDirectives(path, result.line_count);
    return result;
}

std::vector<SourceFileBlocks> scan_source_tree(const std::filesystem::path &root,
                                               const ExtractOptions &options, Diagnostics &diag,
                                               Deadline deadline) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root))
        throw SourceTreeMissing(root.string());
    const std::regex file_re(options.file_regex);

    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it) {
        if (!it->is_regular_file())
            continue;
        std::string rel = fs::relative(it->path(), root).generic_string();
        if (std::regex_match(rel, file_re))
            files.push_back(it->path());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::optional<SourceFileBlocks>> slots(files.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> timed_out{false};

    auto worker = [&] {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= files.size() || timed_out.load())
                return;
            if (deadline && std::chrono::steady_clock::now() > *deadline) {
                timed_out.store(true);
                return;
            }
            const fs::path &p = files[idx];
            std::string rel = fs::relative(p, root).generic_string();
            try {
                std::ifstream in(p, std::ios::binary);
                if (!in)
                    throw IoError(p.string());
                std::ostringstream buf;
                buf << in.rdbuf();
                slots[idx] = extract_blocks(buf.str(), rel, options, diag);
            } catch (const std::exception &e) {
                diag.warn("code-extractor", "skipping " + rel + ": " + e.what());
            }
        }
    };

    unsigned n_threads = std::min<unsigned>(std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(files.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    if (timed_out.load())
        throw ExtractorTimeout("code");

    std::vector<SourceFileBlocks> result;
    result.reserve(files.size());
    for (auto &slot : slots)
        if (slot)
            result.push_back(std::move(*slot));
    return result;
}

namespace {
void collect_block_vars(const CodeBlock &block, std::set<std::string> &out) {
    for (const auto &name : variables(block.condition))
        out.insert(name);
    for (const auto &child : block.children)
        collect_block_vars(child, out);
}
} // namespace

std::set<std::string> collect_code_variables(const std::vector<SourceFileBlocks> &files) {
    std::set<std::string> out;
    for (const auto &file : files)
        for (const auto &block : file.top_blocks)
            collect_block_vars(block, out);
    return out;
}

} // namespace varex
