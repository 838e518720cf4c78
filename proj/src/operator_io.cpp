#include "entwit/operator_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace entwit::io {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxSideDim = 64;

[[noreturn]] void fail(DocumentCode code, const std::string& field, const std::string& detail) {
    throw DocumentError(code, field, detail);
}

void require_keys(const json& j, const std::string& prefix,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known)
            fail(DocumentCode::BadField, prefix + item.key(), "unexpected field");
    }
}

std::string at(const std::string& field, std::size_t i, std::size_t j) {
    std::ostringstream s;
    s << field << '[' << i << "][" << j << ']';
    return s.str();
}

Mat parse_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        fail(DocumentCode::BadField, field, "expected a non-empty array of rows");
    const std::size_t n = j.size();
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != n)
            fail(DocumentCode::BadField, field,
                 "row " + std::to_string(i) + " is not an array of " + std::to_string(n) +
                     " entries");
        for (std::size_t k = 0; k < n; ++k) {
            const json& e = row[k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                fail(DocumentCode::BadField, at(field, i, k),
                     "complex entry must be a [re, im] pair of numbers");
            m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

Mat parse_hermitian(const json& j, const std::string& field, std::size_t dim) {
    Mat m = parse_matrix(j, field);
    if (m.rows() != dim)
        fail(DocumentCode::DimsMismatch, field,
             "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                 " but dims require " + std::to_string(dim) + "x" + std::to_string(dim));
    const double tol = kHermitianTol * std::max(1.0, max_abs(m));
    if (hermiticity_defect(m) > tol)
        fail(DocumentCode::NotHermitian, field, "matrix is not Hermitian");
    return m;
}

Dims parse_dims(const json& j, const std::string& prefix) {
    const std::string field = prefix + "dims";
    if (!j.contains("dims")) fail(DocumentCode::MissingField, field, "required field absent");
    const json& d = j["dims"];
    if (!d.is_array() || d.size() != 2)
        fail(DocumentCode::BadField, field, "expected [dA, dB]");
    std::size_t out[2];
    for (int i = 0; i < 2; ++i) {
        if (!d[i].is_number_integer() || d[i].get<long long>() < 1 ||
            d[i].get<long long>() > static_cast<long long>(kMaxSideDim))
            fail(DocumentCode::BadField, field,
                 "entries must be integers in [1, " + std::to_string(kMaxSideDim) + "]");
        out[i] = d[i].get<std::size_t>();
    }
    return Dims{out[0], out[1]};
}

std::string parse_text_field(const json& j, const std::string& prefix, const char* key) {
    if (!j.contains(key)) return {};
    const json& v = j[key];
    if (!v.is_string()) fail(DocumentCode::BadField, prefix + key, "expected a string");
    return v.get<std::string>();
}

ParsedOperator parse_document(const json& j, const std::string& prefix) {
    if (!j.is_object())
        fail(DocumentCode::Parse, prefix.empty() ? "document" : prefix,
             "operator document must be an object");
    require_keys(j, prefix, {"dims", "matrix", "factors", "name", "comment"});
    const Dims dims = parse_dims(j, prefix);
    const bool has_matrix = j.contains("matrix");
    const bool has_factors = j.contains("factors");
    if (has_matrix && has_factors)
        fail(DocumentCode::Conflict, prefix + "matrix", "matrix and factors are exclusive");
    if (!has_matrix && !has_factors)
        fail(DocumentCode::MissingField, prefix + "matrix",
             "exactly one of matrix / factors is required");

    std::optional<ProductObservable> factors;
    Mat full;
    if (has_matrix) {
        full = parse_hermitian(j["matrix"], prefix + "matrix", dims.total());
    } else {
        const json& f = j["factors"];
        if (!f.is_object()) fail(DocumentCode::BadField, prefix + "factors", "expected an object");
        require_keys(f, prefix + "factors.", {"A", "B"});
        for (const char* side : {"A", "B"})
            if (!f.contains(side))
                fail(DocumentCode::MissingField, prefix + "factors." + side,
                     "required field absent");
        Mat a = parse_hermitian(f["A"], prefix + "factors.A", dims.a);
        Mat b = parse_hermitian(f["B"], prefix + "factors.B", dims.b);
        factors.emplace(std::move(a), std::move(b));
        full = kron(factors->factor_a(), factors->factor_b());
    }
    return ParsedOperator{BipartiteOperator(dims, full), std::move(factors),
                          parse_text_field(j, prefix, "name"),
                          parse_text_field(j, prefix, "comment")};
}

json parse_root(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(DocumentCode::Parse, "document", e.what());
    }
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k)
            row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json document_to_json(const ParsedOperator& parsed) {
    const Dims& dims = parsed.op.dims();
    json j;
    j["dims"] = {dims.a, dims.b};
    if (parsed.factors) {
        j["factors"]["A"] = matrix_to_json(parsed.factors->factor_a());
        j["factors"]["B"] = matrix_to_json(parsed.factors->factor_b());
    } else {
        j["matrix"] = matrix_to_json(parsed.op.matrix());
    }
    if (!parsed.name.empty()) j["name"] = parsed.name;
    if (!parsed.comment.empty()) j["comment"] = parsed.comment;
    return j;
}

}  // namespace

const char* to_string(DocumentCode code) {
    switch (code) {
        case DocumentCode::Parse: return "parse";
        case DocumentCode::MissingField: return "missing-field";
        case DocumentCode::BadField: return "bad-field";
        case DocumentCode::Conflict: return "conflict";
        case DocumentCode::DimsMismatch: return "dims-mismatch";
        case DocumentCode::NotHermitian: return "not-hermitian";
    }
    return "unknown";
}

DocumentError::DocumentError(DocumentCode code, std::string field, const std::string& detail)
    : ValidationError("operator document [" + std::string(to_string(code)) + "] at '" + field +
                      "': " + detail),
      code_(code),
      field_(std::move(field)) {}

ParsedOperator parse_operator(const std::string& text) {
    return parse_document(parse_root(text), "");
}

std::string serialize_operator(const ParsedOperator& parsed) {
    return document_to_json(parsed).dump(2) + "\n";
}

ParsedPair parse_pair(const std::string& text) {
    const json j = parse_root(text);
    if (!j.is_object()) fail(DocumentCode::Parse, "document", "pair document must be an object");
    require_keys(j, "", {"C", "L"});
    for (const char* side : {"C", "L"})
        if (!j.contains(side)) fail(DocumentCode::MissingField, side, "required field absent");
    return ParsedPair{parse_document(j["C"], "C."), parse_document(j["L"], "L.")};
}

std::string serialize_pair(const ParsedPair& pair) {
    json j;
    j["C"] = document_to_json(pair.c);
    j["L"] = document_to_json(pair.l);
    return j.dump(2) + "\n";
}

ParsedOperator load_operator(const std::string& path, PairSlot slot) {
    const std::string text = read_file(path);
    const json j = parse_root(text);
    if (j.is_object() && !j.contains("dims") && (j.contains("C") || j.contains("L"))) {
        if (slot == PairSlot::None)
            fail(DocumentCode::BadField, "document",
                 "expected a single operator document, found a C/L pair");
        ParsedPair pair = parse_pair(text);
        return slot == PairSlot::C ? std::move(pair.c) : std::move(pair.l);
    }
    return parse_document(j, "");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file '" + path + "'");
    out << content;
    if (!out) throw ValidationError("failed writing file '" + path + "'");
}

std::string format_sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows) {
    out << "c,l,epsilon\n";
    for (const auto& r : rows)
        out << format_sig(r.c) << ',' << format_sig(r.l) << ',' << format_sig(r.epsilon) << '\n';
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
    out << "lambda,eig_index,eigenvalue,negativity,class\n";
    for (std::size_t i = 0; i < scan.lambda_grid.size(); ++i) {
        const ScanRecord& rec = scan.per_lambda[i];
        for (std::size_t k = 0; k < rec.eigenvalues.size(); ++k) {
            out << format_sig(scan.lambda_grid[i]) << ',' << k << ','
                << format_sig(rec.eigenvalues[k]) << ',' << format_sig(rec.negativities[k]) << ','
                << to_string(rec.classes[k]) << '\n';
        }
    }
}

}  // namespace entwit::io
