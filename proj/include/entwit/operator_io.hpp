#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entwit/analyzer.hpp"
#include "entwit/bipartite.hpp"
#include "entwit/errors.hpp"
#include "entwit/legendre.hpp"

namespace entwit::io {

// Which rule an operator document violated; the message names the field.
enum class DocumentCode {
    Parse,         // text is not a JSON object
    MissingField,  // required field absent
    BadField,      // field has the wrong type, shape, or value
    Conflict,      // both matrix and factors present
    DimsMismatch,  // body size disagrees with dims
    NotHermitian,  // matrix or factor fails Hermiticity validation
};
const char* to_string(DocumentCode code);

class DocumentError : public ValidationError {
public:
    DocumentError(DocumentCode code, std::string field, const std::string& detail);
    DocumentCode code() const { return code_; }
    const std::string& field() const { return field_; }

private:
    DocumentCode code_;
    std::string field_;
};

// Operator document content. Factor form, when present, is authoritative for
// product-structure-aware operations; op always carries the expanded matrix.
struct ParsedOperator {
    BipartiteOperator op;
    std::optional<ProductObservable> factors;
    std::string name;     // empty when absent
    std::string comment;  // empty when absent
};

// Document layout: {"dims":[dA,dB], "matrix":[[[re,im],...],...]} or
// {"dims":[dA,dB], "factors":{"A":rows,"B":rows}}, exactly one body,
// plus optional string "name" / "comment".
ParsedOperator parse_operator(const std::string& text);
std::string serialize_operator(const ParsedOperator& parsed);

// Pair document {"C": document, "L": document}, as emitted by the catalog.
struct ParsedPair {
    ParsedOperator c;
    ParsedOperator l;
};
ParsedPair parse_pair(const std::string& text);
std::string serialize_pair(const ParsedPair& pair);

// Which operator to extract from a file that may hold a bare operator
// document or a C/L pair document.
enum class PairSlot { None, C, L };
ParsedOperator load_operator(const std::string& path, PairSlot slot = PairSlot::None);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Shortest of %.10g; used by every CSV emitter.
std::string format_sig(double v);

// Header `c,l,epsilon`, one row per grid point in input order.
void write_fig1_csv(std::ostream& out, const std::vector<Fig1Row>& rows);

// Header `lambda,eig_index,eigenvalue,negativity,class`, lambda-major.
void write_scan_csv(std::ostream& out, const ScanResult& scan);

}  // namespace entwit::io
