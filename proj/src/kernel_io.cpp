#include <optional>
#include <sstream>

#include "mprt/errors.hpp"
#include "mprt/kernels.hpp"

// Layout:
//   dimension N
//   parameters nu
//   row e_1^1 ... e_1^nu          (N lines, rationals)
//   support a
//   entry k_1 ... k_nu
//   term                          (one per tensor product in the entry)
//   factor c x r [c x r ...]      (N lines, one bump combination per coordinate)
// Blank lines and '#' comments are ignored.

namespace mprt {

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        Line line{number, {}};
        for (std::string tok; fields >> tok;) line.tokens.push_back(tok);
        if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    return out;
}

int parse_int(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, found '" + tok + "'", line, 1);
    }
}

}  // namespace

std::string write_kernel_text(const DyadicKernelSeq& seq) {
    const auto& scheme = seq.scheme();
    std::string out = "# dyadic kernel sequence\n";
    out += "dimension " + std::to_string(scheme.dimension()) + "\n";
    out += "parameters " + std::to_string(scheme.parameters()) + "\n";
    for (const auto& row : scheme.rows()) {
        out += "row";
        for (const auto& e : row) out += " " + to_string(e);
        out += "\n";
    }
    out += "support " + format_double(seq.support_bound()) + "\n";
    for (const auto& [k, entry] : seq.entries()) {
        out += "entry";
        for (int c : k.components) out += " " + std::to_string(c);
        out += "\n";
        for (const auto& term : entry.terms()) {
            out += "term\n";
            for (const auto& comp : term.components()) {
                out += "factor";
                for (const auto& a : comp.atoms())
                    out += " " + format_double(a.coefficient) + " " + format_double(a.center) + " " + format_double(a.radius);
                out += "\n";
            }
        }
    }
    return out;
}

DyadicKernelSeq read_kernel_text(std::string_view text) {
    auto lines = tokenize(text);
    std::size_t pos = 0;
    auto expect = [&](const char* key, std::size_t min_args) -> const Line& {
        if (pos >= lines.size()) throw ParseError(std::string("missing '") + key + "' line", lines.empty() ? 1 : lines.back().number + 1, 1);
        const Line& l = lines[pos];
        if (l.tokens[0] != key) throw ParseError(std::string("expected '") + key + "', found '" + l.tokens[0] + "'", l.number, 1);
        if (l.tokens.size() < min_args + 1) throw ParseError(std::string("'") + key + "' needs more values", l.number, 1);
        ++pos;
        return l;
    };

    const Line& dim_line = expect("dimension", 1);
    int dim = parse_int(dim_line.tokens[1], dim_line.number);
    const Line& par_line = expect("parameters", 1);
    int nu = parse_int(par_line.tokens[1], par_line.number);
    if (dim < 1 || nu < 1) throw ParseError("dimension and parameters must be positive", par_line.number, 1);

    std::vector<std::vector<Rational>> rows;
    for (int i = 0; i < dim; ++i) {
        const Line& row = expect("row", static_cast<std::size_t>(nu));
        if (row.tokens.size() != static_cast<std::size_t>(nu) + 1)
            throw ParseError("row needs exactly " + std::to_string(nu) + " exponents", row.number, 1);
        std::vector<Rational> r;
        for (int mu = 0; mu < nu; ++mu) {
            try {
                r.push_back(parse_rational(row.tokens[static_cast<std::size_t>(mu) + 1]));
            } catch (const InputError& e) {
                throw ParseError(e.what(), row.number, 1);
            }
        }
        rows.push_back(std::move(r));
    }
    const Line& sup = expect("support", 1);
    double bound;
    try {
        bound = parse_double(sup.tokens[1]);
    } catch (const InputError& e) {
        throw ParseError(e.what(), sup.number, 1);
    }

    std::optional<ExponentScheme> scheme;
    try {
        scheme.emplace(rows);
    } catch (const InputError& e) {
        throw ParseError(e.what(), dim_line.number, 1);
    }
    DyadicKernelSeq seq(*scheme, bound);

    while (pos < lines.size()) {
        const Line& entry_line = expect("entry", static_cast<std::size_t>(nu));
        if (entry_line.tokens.size() != static_cast<std::size_t>(nu) + 1)
            throw ParseError("entry index needs exactly " + std::to_string(nu) + " components", entry_line.number, 1);
        MultiIndex k = MultiIndex::zeros(static_cast<std::size_t>(nu));
        for (int mu = 0; mu < nu; ++mu) k[mu] = parse_int(entry_line.tokens[static_cast<std::size_t>(mu) + 1], entry_line.number);
        if (seq.find(k)) throw ParseError("duplicate entry " + to_string(k), entry_line.number, 1);

        TensorSum sum;
        while (pos < lines.size() && lines[pos].tokens[0] == "term") {
            ++pos;
            std::vector<BumpCombination> comps;
            for (int i = 0; i < dim; ++i) {
                const Line& f = expect("factor", 3);
                if ((f.tokens.size() - 1) % 3 != 0)
                    throw ParseError("factor values must come in (coefficient, center, radius) triples", f.number, 1);
                std::vector<BumpAtom> atoms;
                for (std::size_t j = 1; j < f.tokens.size(); j += 3) {
                    BumpAtom a{};
                    try {
                        a = {parse_double(f.tokens[j]), parse_double(f.tokens[j + 1]), parse_double(f.tokens[j + 2])};
                    } catch (const InputError& e) {
                        throw ParseError(e.what(), f.number, 1);
                    }
                    if (a.radius == 0)
                        throw ParseError("atom radius 0 would be a point mass (delta_0); dyadic files hold smooth bumps only",
                                         f.number, 1);
                    if (a.radius < 0) throw ParseError("atom radius must be positive", f.number, 1);
                    atoms.push_back(a);
                }
                comps.emplace_back(std::move(atoms));
            }
            sum.add(TensorBump(std::move(comps)));
        }
        try {
            seq.set(k, std::move(sum));
        } catch (const InputError& e) {
            throw ParseError(e.what(), entry_line.number, 1);
        }
    }
    return seq;
}

}  // namespace mprt
