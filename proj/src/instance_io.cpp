#include "cutplane/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "cutplane/errors.hpp"

namespace cutplane {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_num(const std::string& tok, int line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (...) {
        throw Error("line " + std::to_string(line_no) + ": malformed number '" + tok + "'");
    }
    if (used != tok.size())
        throw Error("line " + std::to_string(line_no) + ": malformed number '" + tok + "'");
    return v;
}

} // namespace

InstanceFile parse_instance(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int n = -1;

    InstanceFile inst;
    std::optional<NonlinearFunction> objective;
    std::vector<NonlinearFunction> constraints;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;

    // reads an OBJECTIVE/CONSTRAINT QUADRATIC block starting at the next line:
    // exactly n "Q ..." rows, then optional "q ..." and "c ..." lines
    auto read_quadratic = [&]() -> NonlinearFunction {
        if (n < 0) throw Error("line " + std::to_string(line_no) + ": DIM must come first");
        Matrix q(n, n);
        std::vector<double> lin(n, 0.0);
        double c = 0.0;
        int q_rows = 0;
        for (;;) {
            const std::streampos before = in.tellg();
            if (!std::getline(in, line)) break;
            ++line_no;
            const std::vector<std::string> tok = split_ws(line);
            if (tok.empty() || tok[0][0] == '#') continue;
            if (tok[0] == "Q") {
                if (q_rows >= n)
                    throw Error("line " + std::to_string(line_no) + ": too many Q rows");
                if (static_cast<int>(tok.size()) != n + 1)
                    throw Error("line " + std::to_string(line_no) + ": Q row needs " +
                                std::to_string(n) + " entries");
                for (int j = 0; j < n; ++j) q(q_rows, j) = parse_num(tok[j + 1], line_no);
                ++q_rows;
            } else if (tok[0] == "q") {
                if (static_cast<int>(tok.size()) != n + 1)
                    throw Error("line " + std::to_string(line_no) + ": q needs " +
                                std::to_string(n) + " entries");
                for (int j = 0; j < n; ++j) lin[j] = parse_num(tok[j + 1], line_no);
            } else if (tok[0] == "c") {
                if (tok.size() != 2)
                    throw Error("line " + std::to_string(line_no) + ": c needs one value");
                c = parse_num(tok[1], line_no);
            } else {
                // start of the next section
                in.seekg(before);
                --line_no;
                break;
            }
        }
        if (q_rows != n)
            throw Error("QUADRATIC block ended after " + std::to_string(q_rows) + " of " +
                        std::to_string(n) + " Q rows");
        return NonlinearFunction::quadratic(std::move(q), std::move(lin), c);
    };

    auto read_function = [&](const std::vector<std::string>& tok,
                             const std::string& raw) -> NonlinearFunction {
        if (n < 0) throw Error("line " + std::to_string(line_no) + ": DIM must come first");
        if (tok.size() < 2)
            throw Error("line " + std::to_string(line_no) + ": missing EXPR or QUADRATIC");
        if (tok[1] == "QUADRATIC") return read_quadratic();
        if (tok[1] != "EXPR")
            throw Error("line " + std::to_string(line_no) + ": expected EXPR or QUADRATIC");
        const std::size_t at = raw.find("EXPR");
        try {
            return parse_expression(raw.substr(at + 4), n);
        } catch (const ParseError& e) {
            throw Error("line " + std::to_string(line_no) + ": " + e.what());
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<std::string> tok = split_ws(line);
        if (tok.empty() || tok[0][0] == '#') continue;

        if (tok[0] == "DIM") {
            if (tok.size() != 2) throw Error("line " + std::to_string(line_no) + ": DIM needs n");
            n = static_cast<int>(parse_num(tok[1], line_no));
            if (n < 1) throw Error("line " + std::to_string(line_no) + ": DIM must be positive");
        } else if (tok[0] == "OBJECTIVE") {
            if (objective) throw Error("line " + std::to_string(line_no) + ": duplicate OBJECTIVE");
            objective = read_function(tok, line);
        } else if (tok[0] == "CONSTRAINT") {
            constraints.push_back(read_function(tok, line));
        } else if (tok[0] == "LINEAR") {
            if (n < 0) throw Error("line " + std::to_string(line_no) + ": DIM must come first");
            if (static_cast<int>(tok.size()) != n + 3 || tok[n + 1] != "<=")
                throw Error("line " + std::to_string(line_no) +
                            ": LINEAR needs 'a1 ... an <= b'");
            std::vector<double> row(n);
            for (int j = 0; j < n; ++j) row[j] = parse_num(tok[j + 1], line_no);
            rows.push_back(std::move(row));
            rhs.push_back(parse_num(tok[n + 2], line_no));
        } else if (tok[0] == "START") {
            if (tok.size() != 2 || n < 0 || static_cast<int>(tok[1].size()) != n)
                throw Error("line " + std::to_string(line_no) + ": START needs an n-bit string");
            inst.start = from_bitstring(tok[1]);
        } else if (tok[0] == "LIPSCHITZ") {
            if (tok.size() == 3 && tok[1] == "F") {
                inst.lipschitz_f = parse_num(tok[2], line_no);
            } else if (tok.size() == 4 && tok[1] == "G") {
                const int j = static_cast<int>(parse_num(tok[2], line_no));
                inst.lipschitz_g.emplace_back(j - 1, parse_num(tok[3], line_no));
            } else {
                throw Error("line " + std::to_string(line_no) +
                            ": LIPSCHITZ needs 'F v' or 'G j v'");
            }
        } else {
            throw Error("line " + std::to_string(line_no) + ": unknown section '" + tok[0] + "'");
        }
    }

    if (n < 0) throw Error("instance file is missing DIM");
    if (!objective) throw Error("instance file is missing OBJECTIVE");

    inst.problem.n = n;
    inst.problem.objective = *objective;
    inst.problem.constraints = std::move(constraints);
    inst.problem.polyhedron.a = Matrix(static_cast<int>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < n; ++j) inst.problem.polyhedron.a(static_cast<int>(i), j) = rows[i][j];
    inst.problem.polyhedron.b = std::move(rhs);

    const ValidationReport rep = validate_problem(inst.problem);
    for (const std::string& issue : rep.issues)
        if (issue.find("empty feasible region") == std::string::npos)
            throw Error("invalid instance: " + issue);
    return inst;
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open instance file " + path);
    std::stringstream buffer;
    buffer << f.rdbuf();
    return parse_instance(buffer.str());
}

namespace {

void serialize_function(std::ostringstream& out, const std::string& section,
                        const NonlinearFunction& f) {
    if (f.kind() == FunctionKind::Expression) {
        out << section << " EXPR " << to_string(f) << "\n";
        return;
    }
    out << section << " QUADRATIC\n";
    const int n = f.dimension();
    for (int i = 0; i < n; ++i) {
        out << "Q";
        for (int j = 0; j < n; ++j) out << ' ' << format_double(f.quad()(i, j));
        out << "\n";
    }
    out << "q";
    for (int i = 0; i < n; ++i) out << ' ' << format_double(f.linear()[i]);
    out << "\n";
    out << "c " << format_double(f.constant()) << "\n";
}

} // namespace

std::string serialize_instance(const InstanceFile& inst) {
    std::ostringstream out;
    const Problem& p = inst.problem;
    out << "DIM " << p.n << "\n";
    serialize_function(out, "OBJECTIVE", p.objective);
    for (const NonlinearFunction& g : p.constraints) serialize_function(out, "CONSTRAINT", g);
    for (int i = 0; i < p.polyhedron.rows(); ++i) {
        out << "LINEAR";
        for (int j = 0; j < p.n; ++j) out << ' ' << format_double(p.polyhedron.a(i, j));
        out << " <= " << format_double(p.polyhedron.b[i]) << "\n";
    }
    if (inst.start) out << "START " << to_bitstring(*inst.start) << "\n";
    if (inst.lipschitz_f) out << "LIPSCHITZ F " << format_double(*inst.lipschitz_f) << "\n";
    for (auto [j, v] : inst.lipschitz_g)
        out << "LIPSCHITZ G " << j + 1 << ' ' << format_double(v) << "\n";
    return out.str();
}

} // namespace cutplane
