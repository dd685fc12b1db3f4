#include "ergolab/serialization.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace ergolab {

using nlohmann::json;

namespace {

json element_to_json_value(const AlgebraElement& x) {
    json doc;
    doc["dims"] = x.algebra()->block_dims();
    doc["weights"] = x.algebra()->trace_weights();
    json blocks = json::array();
    for (int b = 0; b < x.block_count(); ++b) {
        const Matrix& m = x.block(b);
        json rows = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
            rows.push_back(std::move(row));
        }
        blocks.push_back(std::move(rows));
    }
    doc["blocks"] = std::move(blocks);
    return doc;
}

AlgebraElement element_from_json_value(const json& doc) {
    if (!doc.contains("dims") || !doc.contains("weights") || !doc.contains("blocks"))
        throw std::invalid_argument("element document needs dims, weights and blocks");
    AlgebraPtr alg = make_algebra(doc.at("dims").get<std::vector<int>>(),
                                  doc.at("weights").get<std::vector<double>>());
    const json& blocks = doc.at("blocks");
    if (static_cast<int>(blocks.size()) != alg->block_count())
        throw std::invalid_argument("element document block count mismatch");
    std::vector<Matrix> mats;
    for (int b = 0; b < alg->block_count(); ++b) {
        const int d = alg->block_dim(b);
        const json& rows = blocks.at(static_cast<size_t>(b));
        if (static_cast<int>(rows.size()) != d)
            throw std::invalid_argument("element document row count mismatch");
        Matrix m(d, d);
        for (int i = 0; i < d; ++i) {
            const json& row = rows.at(static_cast<size_t>(i));
            if (static_cast<int>(row.size()) != d)
                throw std::invalid_argument("element document column count mismatch");
            for (int j = 0; j < d; ++j) {
                const json& cell = row.at(static_cast<size_t>(j));
                if (!cell.is_array() || cell.size() != 2)
                    throw std::invalid_argument("element entries must be [re, im] pairs");
                m(i, j) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
            }
        }
        mats.push_back(std::move(m));
    }
    return AlgebraElement(std::move(alg), std::move(mats));
}

}  // namespace

std::string element_to_json(const AlgebraElement& x, int indent) {
    return element_to_json_value(x).dump(indent);
}

AlgebraElement element_from_json(const std::string& text) {
    return element_from_json_value(json::parse(text));
}

AlgebraElement element_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    json doc;
    in >> doc;
    return element_from_json_value(doc);
}

void write_element_json_file(const std::filesystem::path& path, const AlgebraElement& x) {
    atomic_write_file(path, element_to_json(x, 2) + "\n");
}

std::string algebra_to_json(const TracialAlgebra& algebra, int indent) {
    json doc;
    doc["dims"] = algebra.block_dims();
    doc["weights"] = algebra.trace_weights();
    return doc.dump(indent);
}

AlgebraPtr algebra_from_json(const std::string& text) {
    json doc = json::parse(text);
    return make_algebra(doc.at("dims").get<std::vector<int>>(),
                        doc.at("weights").get<std::vector<double>>());
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void atomic_write_file(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ergolab
