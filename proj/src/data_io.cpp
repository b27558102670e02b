#include "grwc/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "grwc/rng.hpp"

namespace grwc {

namespace {

constexpr std::uint32_t kImageMagic = 2051; // 0x00000803
constexpr std::uint32_t kLabelMagic = 2049; // 0x00000801
constexpr std::size_t kNumClasses = 10;

std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

} // namespace

IdxImages parse_idx_images(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 16) {
        throw IdxLengthError("idx image file truncated: " + std::to_string(bytes.size()) +
                             " bytes, header needs 16");
    }
    const std::uint32_t magic = read_be32(bytes.data());
    if (magic != kImageMagic) {
        throw IdxFormatError("idx image file: expected magic " + std::to_string(kImageMagic) +
                             ", got " + std::to_string(magic));
    }
    IdxImages images;
    images.count = read_be32(bytes.data() + 4);
    images.rows = read_be32(bytes.data() + 8);
    images.cols = read_be32(bytes.data() + 12);
    const std::size_t expected =
        16 + std::size_t(images.count) * images.rows * images.cols;
    if (bytes.size() != expected) {
        throw IdxLengthError("idx image file: header declares " + std::to_string(expected) +
                             " bytes, file has " + std::to_string(bytes.size()));
    }
    images.pixels.assign(bytes.begin() + 16, bytes.end());
    return images;
}

IdxLabels parse_idx_labels(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8) {
        throw IdxLengthError("idx label file truncated: " + std::to_string(bytes.size()) +
                             " bytes, header needs 8");
    }
    const std::uint32_t magic = read_be32(bytes.data());
    if (magic != kLabelMagic) {
        throw IdxFormatError("idx label file: expected magic " + std::to_string(kLabelMagic) +
                             ", got " + std::to_string(magic));
    }
    IdxLabels labels;
    labels.count = read_be32(bytes.data() + 4);
    const std::size_t expected = 8 + std::size_t(labels.count);
    if (bytes.size() != expected) {
        throw IdxLengthError("idx label file: header declares " + std::to_string(expected) +
                             " bytes, file has " + std::to_string(bytes.size()));
    }
    labels.labels.assign(bytes.begin() + 8, bytes.end());
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        if (labels.labels[i] > 9) {
            throw DataConsistencyError("idx label file: label " + std::to_string(i) +
                                       " is " + std::to_string(labels.labels[i]) +
                                       ", expected 0..9");
        }
    }
    return labels;
}

std::vector<std::uint8_t> idx_image_bytes(const IdxImages& images) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + images.pixels.size());
    append_be32(out, kImageMagic);
    append_be32(out, images.count);
    append_be32(out, images.rows);
    append_be32(out, images.cols);
    out.insert(out.end(), images.pixels.begin(), images.pixels.end());
    return out;
}

std::vector<std::uint8_t> idx_label_bytes(const IdxLabels& labels) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.labels.size());
    append_be32(out, kLabelMagic);
    append_be32(out, labels.count);
    out.insert(out.end(), labels.labels.begin(), labels.labels.end());
    return out;
}

IdxImages read_idx_images(const std::string& path) {
    try {
        return parse_idx_images(read_file(path));
    } catch (const IdxFormatError& e) {
        throw IdxFormatError(path + ": " + e.what());
    } catch (const IdxLengthError& e) {
        throw IdxLengthError(path + ": " + e.what());
    }
}

IdxLabels read_idx_labels(const std::string& path) {
    try {
        return parse_idx_labels(read_file(path));
    } catch (const IdxFormatError& e) {
        throw IdxFormatError(path + ": " + e.what());
    } catch (const IdxLengthError& e) {
        throw IdxLengthError(path + ": " + e.what());
    } catch (const DataConsistencyError& e) {
        throw DataConsistencyError(path + ": " + e.what());
    }
}

void write_idx_images(const std::string& path, const IdxImages& images) {
    write_file(path, idx_image_bytes(images));
}

void write_idx_labels(const std::string& path, const IdxLabels& labels) {
    write_file(path, idx_label_bytes(labels));
}

namespace {

Sample make_sample(const IdxImages& images, const IdxLabels& labels, std::size_t i) {
    const std::size_t dim = std::size_t(images.rows) * images.cols;
    Sample s;
    s.x.resize(dim);
    const std::uint8_t* px = images.pixels.data() + i * dim;
    for (std::size_t k = 0; k < dim; ++k) s.x[k] = px[k] / 255.0;
    s.y.assign(kNumClasses, 0.0);
    s.y[labels.labels[i]] = 1.0;
    return s;
}

} // namespace

Dataset idx_to_dataset(const IdxImages& images, const IdxLabels& labels,
                       std::size_t limit, bool balanced) {
    if (images.count != labels.count) {
        throw DataConsistencyError("image count " + std::to_string(images.count) +
                                   " does not match label count " + std::to_string(labels.count));
    }
    if (limit == 0) throw std::invalid_argument("limit must be >= 1");
    if (limit > images.count) {
        throw std::invalid_argument("limit " + std::to_string(limit) + " exceeds file count " +
                                    std::to_string(images.count));
    }
    Dataset data;
    data.samples.reserve(limit);
    if (!balanced) {
        for (std::size_t i = 0; i < limit; ++i) {
            data.samples.push_back(make_sample(images, labels, i));
        }
        return data;
    }
    if (limit % kNumClasses != 0) {
        throw std::invalid_argument("balanced selection needs limit divisible by " +
                                    std::to_string(kNumClasses));
    }
    const std::size_t per_class = limit / kNumClasses;
    std::vector<std::size_t> taken(kNumClasses, 0);
    for (std::size_t i = 0; i < images.count && data.samples.size() < limit; ++i) {
        const std::uint8_t c = labels.labels[i];
        if (taken[c] < per_class) {
            data.samples.push_back(make_sample(images, labels, i));
            ++taken[c];
        }
    }
    if (data.samples.size() < limit) {
        throw DataConsistencyError("balanced selection: not enough samples of every class");
    }
    return data;
}

Dataset load_mnist(const std::string& images_path, const std::string& labels_path,
                   std::size_t limit, bool balanced) {
    return idx_to_dataset(read_idx_images(images_path), read_idx_labels(labels_path),
                          limit, balanced);
}

std::pair<IdxImages, IdxLabels> dataset_to_idx(const Dataset& data,
                                               std::uint32_t rows, std::uint32_t cols) {
    const std::size_t dim = std::size_t(rows) * cols;
    IdxImages images;
    images.count = static_cast<std::uint32_t>(data.samples.size());
    images.rows = rows;
    images.cols = cols;
    images.pixels.reserve(data.samples.size() * dim);
    IdxLabels labels;
    labels.count = images.count;
    labels.labels.reserve(data.samples.size());
    for (const Sample& s : data.samples) {
        if (s.x.size() != dim) {
            throw std::invalid_argument("dataset_to_idx: sample length does not match rows*cols");
        }
        for (double v : s.x) {
            images.pixels.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
        }
        const auto cls = std::max_element(s.y.begin(), s.y.end()) - s.y.begin();
        labels.labels.push_back(static_cast<std::uint8_t>(cls));
    }
    return {std::move(images), std::move(labels)};
}

Dataset make_synthetic(const std::string& kind, std::uint64_t seed) {
    if (kind == "xor") {
        Dataset data;
        data.samples = {
            {{0.0, 0.0}, {1.0, 0.0}},
            {{0.0, 1.0}, {0.0, 1.0}},
            {{1.0, 0.0}, {0.0, 1.0}},
            {{1.0, 1.0}, {1.0, 0.0}},
        };
        return data;
    }
    if (kind == "gaussian_blobs") {
        constexpr double kSigma = 0.08;
        constexpr std::size_t kPerClass = 10;
        const double centers[4][2] = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
        Rng rng(seed);
        Dataset data;
        data.samples.reserve(4 * kPerClass);
        for (std::size_t c = 0; c < 4; ++c) {
            for (std::size_t k = 0; k < kPerClass; ++k) {
                Sample s;
                s.x.resize(2);
                for (std::size_t d = 0; d < 2; ++d) {
                    s.x[d] = std::clamp(centers[c][d] + kSigma * rng.gaussian(), 0.0, 1.0);
                }
                s.y.assign(4, 0.0);
                s.y[c] = 1.0;
                data.samples.push_back(std::move(s));
            }
        }
        return data;
    }
    throw std::invalid_argument("unknown synthetic dataset kind: " + kind);
}

} // namespace grwc
