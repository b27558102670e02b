#include "doctest.h"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grwc/data_io.hpp"
#include "grwc/rng.hpp"

using namespace grwc;

namespace {

std::vector<std::uint8_t> image_header(std::uint32_t count, std::uint32_t rows, std::uint32_t cols) {
    auto be = [](std::uint32_t v) {
        return std::vector<std::uint8_t>{std::uint8_t(v >> 24), std::uint8_t(v >> 16),
                                         std::uint8_t(v >> 8), std::uint8_t(v)};
    };
    std::vector<std::uint8_t> out = be(2051);
    for (std::uint32_t v : {count, rows, cols}) {
        const auto b = be(v);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

} // namespace

TEST_CASE("image header fields are parsed big-endian") {
    std::vector<std::uint8_t> bytes = image_header(2, 2, 3);
    for (int i = 0; i < 12; ++i) bytes.push_back(std::uint8_t(i * 20));
    const IdxImages images = parse_idx_images(bytes);
    CHECK(images.count == 2);
    CHECK(images.rows == 2);
    CHECK(images.cols == 3);
    CHECK(images.pixels.size() == 12);
    CHECK(images.pixels[1] == 20);
}

TEST_CASE("label file parsing and validation") {
    std::vector<std::uint8_t> bytes = {0, 0, 8, 1, 0, 0, 0, 3, 0, 5, 9};
    const IdxLabels labels = parse_idx_labels(bytes);
    CHECK(labels.count == 3);
    CHECK(labels.labels == std::vector<std::uint8_t>{0, 5, 9});

    bytes[10] = 10; // out of range
    CHECK_THROWS_AS(parse_idx_labels(bytes), DataConsistencyError);
}

TEST_CASE("bad magic is a format error naming both values") {
    std::vector<std::uint8_t> bytes = image_header(1, 1, 1);
    bytes.push_back(0);
    bytes[3] = 4; // magic 2052
    CHECK_THROWS_WITH_AS(parse_idx_images(bytes), doctest::Contains("2051"), IdxFormatError);
    std::vector<std::uint8_t> labels = {0, 0, 8, 2, 0, 0, 0, 1, 3};
    CHECK_THROWS_WITH_AS(parse_idx_labels(labels), doctest::Contains("2049"), IdxFormatError);
}

TEST_CASE("truncated or oversized files are length errors") {
    std::vector<std::uint8_t> bytes = image_header(2, 2, 2);
    for (int i = 0; i < 7; ++i) bytes.push_back(1); // needs 8 payload bytes
    CHECK_THROWS_AS(parse_idx_images(bytes), IdxLengthError);
    bytes.push_back(1);
    CHECK_NOTHROW(parse_idx_images(bytes));
    bytes.push_back(1);
    CHECK_THROWS_AS(parse_idx_images(bytes), IdxLengthError);
    CHECK_THROWS_AS(parse_idx_images({0, 0, 8}), IdxLengthError);
    CHECK_THROWS_AS(parse_idx_labels({0, 0, 8, 1, 0, 0, 0, 9, 1}), IdxLengthError);
}

TEST_CASE("idx_to_dataset scales pixels and one-hots labels") {
    IdxImages images;
    images.count = 2;
    images.rows = 1;
    images.cols = 2;
    images.pixels = {255, 0, 128, 64};
    IdxLabels labels;
    labels.count = 2;
    labels.labels = {3, 9};
    const Dataset data = idx_to_dataset(images, labels, 2);
    REQUIRE(data.samples.size() == 2);
    CHECK(data.samples[0].x == std::vector<double>{1.0, 0.0});
    CHECK(data.samples[0].y[3] == 1.0);
    CHECK(data.samples[1].y[9] == 1.0);
    for (std::size_t k = 0; k < 10; ++k) {
        if (k != 3) CHECK(data.samples[0].y[k] == 0.0);
    }
    CHECK(data.samples[1].x[0] == doctest::Approx(128.0 / 255.0));

    // a shorter prefix
    const Dataset one = idx_to_dataset(images, labels, 1);
    CHECK(one.samples.size() == 1);
    CHECK_THROWS_AS(idx_to_dataset(images, labels, 3), std::invalid_argument);

    labels.count = 1;
    labels.labels = {3};
    CHECK_THROWS_AS(idx_to_dataset(images, labels, 1), DataConsistencyError);
}

TEST_CASE("balanced selection takes the first of each class in file order") {
    IdxImages images;
    images.count = 30;
    images.rows = 1;
    images.cols = 1;
    IdxLabels labels;
    labels.count = 30;
    for (std::uint8_t i = 0; i < 30; ++i) {
        images.pixels.push_back(i);
        // class 9 appears only twice; every other class three times
        labels.labels.push_back(i == 29 ? std::uint8_t(0) : std::uint8_t(i % 10));
    }
    const Dataset data = idx_to_dataset(images, labels, 20, true);
    REQUIRE(data.samples.size() == 20);
    // file order interleaves classes 0..9 twice before index 20
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(data.samples[i].x[0] == doctest::Approx(double(i) / 255.0));
    }
    CHECK_THROWS_AS(idx_to_dataset(images, labels, 25, true), std::invalid_argument);

    // class 9 only appears twice in the first 30, so 3-per-class must fail
    CHECK_THROWS_AS(idx_to_dataset(images, labels, 30, true), DataConsistencyError);
}

TEST_CASE("dataset round-trips through idx bytes") {
    Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        IdxImages images;
        images.count = 1 + std::uint32_t(rng.next_u64() % 8);
        images.rows = 1 + std::uint32_t(rng.next_u64() % 5);
        images.cols = 1 + std::uint32_t(rng.next_u64() % 5);
        IdxLabels labels;
        labels.count = images.count;
        for (std::uint32_t i = 0; i < images.count; ++i) {
            labels.labels.push_back(std::uint8_t(rng.next_u64() % 10));
            for (std::uint32_t p = 0; p < images.rows * images.cols; ++p) {
                images.pixels.push_back(std::uint8_t(rng.next_u64() % 256));
            }
        }
        const auto bytes_in = idx_image_bytes(images);
        const IdxImages reparsed = parse_idx_images(bytes_in);
        CHECK(reparsed == images);

        const Dataset data = idx_to_dataset(images, labels, images.count);
        const auto [im2, lb2] = dataset_to_idx(data, images.rows, images.cols);
        CHECK(im2 == images);
        CHECK(lb2 == labels);
        CHECK(idx_image_bytes(im2) == bytes_in);
        CHECK(idx_label_bytes(lb2) == idx_label_bytes(labels));
    }
}

TEST_CASE("xor dataset is the four patterns") {
    const Dataset data = make_synthetic("xor", 123);
    REQUIRE(data.samples.size() == 4);
    CHECK(data.samples[0].x == std::vector<double>{0.0, 0.0});
    CHECK(data.samples[0].y == std::vector<double>{1.0, 0.0});
    CHECK(data.samples[1].x == std::vector<double>{0.0, 1.0});
    CHECK(data.samples[1].y == std::vector<double>{0.0, 1.0});
    CHECK(data.samples[2].x == std::vector<double>{1.0, 0.0});
    CHECK(data.samples[2].y == std::vector<double>{0.0, 1.0});
    CHECK(data.samples[3].x == std::vector<double>{1.0, 1.0});
    CHECK(data.samples[3].y == std::vector<double>{1.0, 0.0});
}

TEST_CASE("gaussian blobs are seeded, clamped and class-balanced") {
    const Dataset a = make_synthetic("gaussian_blobs", 9);
    const Dataset b = make_synthetic("gaussian_blobs", 9);
    const Dataset c = make_synthetic("gaussian_blobs", 10);
    REQUIRE(a.samples.size() == 40);
    bool any_difference = false;
    std::vector<std::size_t> per_class(4, 0);
    for (std::size_t i = 0; i < 40; ++i) {
        CHECK(a.samples[i].x == b.samples[i].x);
        if (a.samples[i].x != c.samples[i].x) any_difference = true;
        for (double v : a.samples[i].x) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        REQUIRE(a.samples[i].y.size() == 4);
        for (std::size_t k = 0; k < 4; ++k) {
            if (a.samples[i].y[k] == 1.0) ++per_class[k];
        }
    }
    CHECK(any_difference);
    for (std::size_t k = 0; k < 4; ++k) CHECK(per_class[k] == 10);

    const NetworkTopology topo{2, 5, 4};
    CHECK_NOTHROW(validate_dataset(topo, a));
}

TEST_CASE("unknown synthetic kind is rejected") {
    CHECK_THROWS_WITH_AS(make_synthetic("spiral", 1), doctest::Contains("spiral"),
                         std::invalid_argument);
}
