#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>

#include "entwit/catalog.hpp"
#include "entwit/operator_io.hpp"

using namespace entwit;
using namespace entwit::io;

namespace {

const char* kFactorDoc = R"({
  "dims": [2, 2],
  "factors": {
    "A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
    "B": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
  },
  "name": "xx"
})";

const char* kMatrixDoc = R"({
  "dims": [2, 2],
  "comment": "diagonal",
  "matrix": [
    [[1, 0], [0, 0], [0, 0], [0, 0]],
    [[0, 0], [2, 0], [0, 0], [0, 0]],
    [[0, 0], [0, 0], [3, 0], [0, 0]],
    [[0, 0], [0, 0], [0, 0], [4, 0]]
  ]
})";

DocumentError capture(const std::string& text) {
    try {
        parse_operator(text);
    } catch (const DocumentError& e) {
        return e;
    }
    FAIL("expected a document error");
    return DocumentError(DocumentCode::Parse, "", "");
}

bool same_matrix(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    Mat d = a;
    d -= b;
    return max_abs(d) == 0.0;
}

std::string temp_path(const char* stem) {
    return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("factor documents expand to the tensor product") {
    const ParsedOperator p = parse_operator(kFactorDoc);
    CHECK(p.name == "xx");
    CHECK(p.comment.empty());
    REQUIRE(p.factors.has_value());
    const Mat expected = kron(p.factors->factor_a(), p.factors->factor_b());
    CHECK(same_matrix(p.op.matrix(), expected));
    CHECK(p.op.matrix()(0, 3) == cplx(1, 0));
}

TEST_CASE("matrix documents carry the entries verbatim") {
    const ParsedOperator p = parse_operator(kMatrixDoc);
    CHECK(p.comment == "diagonal");
    CHECK_FALSE(p.factors.has_value());
    CHECK(p.op.dims() == Dims{2, 2});
    CHECK(p.op.matrix()(3, 3) == cplx(4, 0));
}

TEST_CASE("each violation reports its code and the offending field") {
    const DocumentError not_json = capture("{nope");
    CHECK(not_json.code() == DocumentCode::Parse);
    CHECK(not_json.field() == "document");

    CHECK(capture("[1, 2]").code() == DocumentCode::Parse);

    const DocumentError no_dims = capture(R"({"matrix": [[[1, 0]]]})");
    CHECK(no_dims.code() == DocumentCode::MissingField);
    CHECK(no_dims.field() == "dims");

    CHECK(capture(R"({"dims": [2], "matrix": [[[1, 0]]]})").code() == DocumentCode::BadField);
    CHECK(capture(R"({"dims": [2, 100], "matrix": [[[1, 0]]]})").code() ==
          DocumentCode::BadField);

    const DocumentError wrong_size =
        capture(R"({"dims": [2, 2], "matrix": [[[1, 0]]]})");
    CHECK(wrong_size.code() == DocumentCode::DimsMismatch);
    CHECK(wrong_size.field() == "matrix");

    const DocumentError entry = capture(
        R"({"dims": [1, 1], "matrix": [[5]]})");
    CHECK(entry.code() == DocumentCode::BadField);
    CHECK(entry.field() == "matrix[0][0]");

    const DocumentError skew = capture(
        R"({"dims": [1, 2], "matrix": [[[0, 0], [0, 1]], [[0, 1], [0, 0]]]})");
    CHECK(skew.code() == DocumentCode::NotHermitian);
    CHECK(skew.field() == "matrix");

    const DocumentError both = capture(
        R"({"dims": [1, 1], "matrix": [[[1, 0]]], "factors": {"A": [[[1, 0]]], "B": [[[1, 0]]]}})");
    CHECK(both.code() == DocumentCode::Conflict);

    const DocumentError neither = capture(R"({"dims": [1, 1]})");
    CHECK(neither.code() == DocumentCode::MissingField);

    const DocumentError one_side = capture(
        R"({"dims": [1, 1], "factors": {"A": [[[1, 0]]]}})");
    CHECK(one_side.code() == DocumentCode::MissingField);
    CHECK(one_side.field() == "factors.B");

    const DocumentError unknown = capture(
        R"({"dims": [1, 1], "matrix": [[[1, 0]]], "extra": 1})");
    CHECK(unknown.code() == DocumentCode::BadField);
    CHECK(unknown.field() == "extra");

    const DocumentError bad_name = capture(
        R"({"dims": [1, 1], "matrix": [[[1, 0]]], "name": 7})");
    CHECK(bad_name.code() == DocumentCode::BadField);
    CHECK(bad_name.field() == "name");

    // The message carries both the code slug and the field.
    CHECK(std::string(wrong_size.what()).find("dims-mismatch") != std::string::npos);
    CHECK(std::string(wrong_size.what()).find("'matrix'") != std::string::npos);

    std::set<std::string> slugs;
    for (const DocumentCode c :
         {DocumentCode::Parse, DocumentCode::MissingField, DocumentCode::BadField,
          DocumentCode::Conflict, DocumentCode::DimsMismatch, DocumentCode::NotHermitian})
        slugs.insert(to_string(c));
    CHECK(slugs.size() == 6);
}

TEST_CASE("pair documents validate both slots with prefixed fields") {
    const DocumentError missing = [] {
        try {
            parse_pair(R"({"C": {"dims": [1, 1], "matrix": [[[1, 0]]]}})");
        } catch (const DocumentError& e) {
            return e;
        }
        FAIL("expected a document error");
        return DocumentError(DocumentCode::Parse, "", "");
    }();
    CHECK(missing.code() == DocumentCode::MissingField);
    CHECK(missing.field() == "L");

    try {
        parse_pair(
            R"({"C": {"dims": [1, 2], "matrix": [[[0, 0], [0, 1]], [[0, 1], [0, 0]]]},
                "L": {"dims": [1, 1], "matrix": [[[1, 0]]]}})");
        FAIL("expected a document error");
    } catch (const DocumentError& e) {
        CHECK(e.code() == DocumentCode::NotHermitian);
        CHECK(e.field() == "C.matrix");
    }
}

TEST_CASE("serialization round-trips every catalog operator exactly") {
    for (const std::string& name : catalog_names()) {
        const CatalogEntry e = catalog(name);
        for (const bool use_l : {false, true}) {
            ParsedOperator doc{use_l ? e.l_op : e.c_op, use_l ? e.l_factors : e.c_factors,
                               e.name, e.description};
            const std::string text = serialize_operator(doc);
            const ParsedOperator back = parse_operator(text);
            CHECK(same_matrix(back.op.matrix(), doc.op.matrix()));
            CHECK(back.factors.has_value() == doc.factors.has_value());
            if (back.factors && doc.factors) {
                CHECK(same_matrix(back.factors->factor_a(), doc.factors->factor_a()));
                CHECK(same_matrix(back.factors->factor_b(), doc.factors->factor_b()));
            }
            CHECK(back.name == doc.name);
            CHECK(back.comment == doc.comment);
            CHECK(serialize_operator(back) == text);
        }

        const ParsedPair pair{{e.c_op, e.c_factors, e.name, ""},
                              {e.l_op, e.l_factors, e.name, ""}};
        const std::string text = serialize_pair(pair);
        const ParsedPair back = parse_pair(text);
        CHECK(same_matrix(back.c.op.matrix(), e.c_op.matrix()));
        CHECK(same_matrix(back.l.op.matrix(), e.l_op.matrix()));
        CHECK(serialize_pair(back) == text);
    }
}

TEST_CASE("operator files may hold one document or a pair") {
    const std::string bare = temp_path("entwit_test_bare.json");
    const std::string pair = temp_path("entwit_test_pair.json");
    write_file(bare, serialize_operator(parse_operator(kMatrixDoc)));
    const CatalogEntry e = catalog("xxzz");
    write_file(pair, serialize_pair(ParsedPair{{e.c_op, e.c_factors, "c", ""},
                                               {e.l_op, e.l_factors, "l", ""}}));

    CHECK(load_operator(bare).op.matrix()(1, 1) == cplx(2, 0));
    CHECK(same_matrix(load_operator(pair, PairSlot::C).op.matrix(), e.c_op.matrix()));
    CHECK(same_matrix(load_operator(pair, PairSlot::L).op.matrix(), e.l_op.matrix()));
    CHECK(load_operator(bare, PairSlot::C).op.dims() == Dims{2, 2});

    try {
        load_operator(pair, PairSlot::None);
        FAIL("expected a document error");
    } catch (const DocumentError& err) {
        CHECK(err.code() == DocumentCode::BadField);
    }
    CHECK_THROWS_AS(load_operator(temp_path("entwit_test_absent.json")), ValidationError);

    std::remove(bare.c_str());
    std::remove(pair.c_str());
}

TEST_CASE("numeric formatting keeps ten significant digits") {
    CHECK(format_sig(0) == "0");
    CHECK(format_sig(0.5) == "0.5");
    CHECK(format_sig(1.0 / 3) == "0.3333333333");
    CHECK(format_sig(-1.25e-7) == "-1.25e-07");
    CHECK(format_sig(1e100) == "1e+100");
    CHECK(format_sig(0.5222997658555257) == "0.5222997659");
}

TEST_CASE("grid and scan tables have fixed headers and row order") {
    std::ostringstream fig;
    write_fig1_csv(fig, {{0, 0, 0}, {0.5, 1, 0.0669872981}});
    CHECK(fig.str() == "c,l,epsilon\n0,0,0\n0.5,1,0.0669872981\n");

    ScanResult scan;
    scan.lambda_grid = {0, 1};
    ScanRecord rec;
    rec.eigenvalues = {-1, 0.25};
    rec.classes = {StateClass::Product, StateClass::Entangled};
    rec.negativities = {0, 0.5};
    scan.per_lambda = {rec, rec};
    std::ostringstream out;
    write_scan_csv(out, scan);
    CHECK(out.str() ==
          "lambda,eig_index,eigenvalue,negativity,class\n"
          "0,0,-1,0,product\n"
          "0,1,0.25,0.5,entangled\n"
          "1,0,-1,0,product\n"
          "1,1,0.25,0.5,entangled\n");

    std::ostringstream again;
    write_scan_csv(again, scan);
    CHECK(again.str() == out.str());
}
