#include "gchain/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gchain {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw std::invalid_argument("chain spec " + context + ": " + message);
}

void require_keys(const json& obj, const std::string& context,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
    for (const std::string& key : required)
        if (!obj.contains(key)) fail(context, "missing key \"" + key + "\"");
    for (const auto& item : obj.items())
        if (!required.count(item.key()) && !optional.count(item.key()))
            fail(context, "unknown key \"" + item.key() + "\"");
}

Matrix parse_matrix(const json& value, const std::string& context, Eigen::Index dim) {
    if (!value.is_array()) fail(context, "expected an array of rows");
    if (static_cast<Eigen::Index>(value.size()) != dim)
        fail(context, "expected " + std::to_string(dim) + " rows, got " +
                          std::to_string(value.size()));
    Matrix out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const json& row = value[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
            fail(context, "row " + std::to_string(r) + " must hold " + std::to_string(dim) +
                              " numbers");
        for (Eigen::Index c = 0; c < dim; ++c) {
            const json& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number())
                fail(context, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                  ") is not a number");
            out(r, c) = cell.get<double>();
        }
    }
    return out;
}

ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

int parse_positive_int(const json& value, const std::string& context) {
    if (!value.is_number_integer() || value.get<long long>() < 1)
        fail(context, "expected a positive integer");
    return static_cast<int>(value.get<long long>());
}

} // namespace

ChainSpec parse_chain_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("chain spec: ") + err.what());
    }
    if (!doc.is_object()) fail("document", "top level must be an object");
    if (!doc.contains("schema")) fail("document", "missing key \"schema\"");
    if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != kSchemaVersion)
        fail("document", "unsupported schema version (expected " +
                             std::to_string(kSchemaVersion) + ")");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        fail("document", "missing string key \"kind\"");
    const std::string kind = doc["kind"].get<std::string>();

    if (!doc.contains("k")) fail("document", "missing key \"k\"");
    const int k = parse_positive_int(doc["k"], "\"k\"");
    const Eigen::Index dim = 2 * static_cast<Eigen::Index>(k);

    if (kind == "exchangeable") {
        require_keys(doc, "exchangeable document", {"schema", "kind", "k", "A", "B"});
        return ChainSpec(ExchangeableChain{SymBlock(parse_matrix(doc["A"], "\"A\"", dim)),
                                           SymBlock(parse_matrix(doc["B"], "\"B\"", dim))});
    }
    if (kind == "banded") {
        require_keys(doc, "banded document", {"schema", "kind", "k", "A", "B", "j"});
        return ChainSpec(BandedChain{SymBlock(parse_matrix(doc["A"], "\"A\"", dim)),
                                     SymBlock(parse_matrix(doc["B"], "\"B\"", dim)),
                                     parse_positive_int(doc["j"], "\"j\"")});
    }
    if (kind == "toeplitz_mixture") {
        require_keys(doc, "mixture document", {"schema", "kind", "k", "A", "bands"});
        if (!doc["bands"].is_array()) fail("\"bands\"", "expected an array");
        ToeplitzMixtureChain chain{SymBlock(parse_matrix(doc["A"], "\"A\"", dim)), {}};
        std::size_t index = 0;
        for (const json& entry : doc["bands"]) {
            const std::string context = "\"bands\"[" + std::to_string(index++) + "]";
            if (!entry.is_object()) fail(context, "expected an object");
            require_keys(entry, context, {"j", "p", "B"});
            if (!entry["p"].is_number()) fail(context + ".p", "expected a number");
            chain.bands.push_back(MixtureBand{parse_positive_int(entry["j"], context + ".j"),
                                              entry["p"].get<double>(),
                                              SymBlock(parse_matrix(entry["B"], context + ".B", dim))});
        }
        return ChainSpec(std::move(chain));
    }
    fail("\"kind\"", "expected \"exchangeable\", \"banded\" or \"toeplitz_mixture\", got \"" +
                         kind + "\"");
}

ChainSpec load_chain_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("chain spec: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_chain_spec(buffer.str());
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(path.string() + ": " + err.what());
    }
}

std::string serialize_chain_spec(const ChainSpec& spec, int indent) {
    ordered_json doc;
    doc["schema"] = kSchemaVersion;
    doc["kind"] = to_string(spec.kind());
    doc["k"] = spec.site_modes();
    if (const auto* ex = spec.as_exchangeable()) {
        doc["A"] = matrix_json(ex->site.matrix());
        doc["B"] = matrix_json(ex->coupling.matrix());
    } else if (const auto* bd = spec.as_banded()) {
        doc["A"] = matrix_json(bd->site.matrix());
        doc["B"] = matrix_json(bd->coupling.matrix());
        doc["j"] = bd->band;
    } else {
        const auto* mx = spec.as_mixture();
        doc["A"] = matrix_json(mx->site.matrix());
        ordered_json bands = ordered_json::array();
        for (const MixtureBand& b : mx->bands) {
            ordered_json entry;
            entry["j"] = b.band;
            entry["p"] = b.weight;
            entry["B"] = matrix_json(b.coupling.matrix());
            bands.push_back(std::move(entry));
        }
        doc["bands"] = std::move(bands);
    }
    return doc.dump(indent);
}

} // namespace gchain
