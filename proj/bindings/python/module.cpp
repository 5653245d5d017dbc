#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "bakercrypt/analysis.hpp"
#include "bakercrypt/chaos.hpp"
#include "bakercrypt/cipher.hpp"
#include "bakercrypt/error.hpp"
#include "bakercrypt/gif.hpp"
#include "bakercrypt/io.hpp"
#include "bakercrypt/jpeg.hpp"
#include "bakercrypt/nist.hpp"

namespace py = pybind11;
using namespace bakercrypt;

namespace {

std::vector<uint8_t> to_vec(const py::bytes& b) {
    std::string s = b;
    return std::vector<uint8_t>(s.begin(), s.end());
}

py::bytes to_bytes(const std::vector<uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<uint8_t> crypt(const std::vector<uint8_t>& data, const chaos::KeyMaterial& key,
                           bool encrypting) {
    switch (io::sniff_magic(data)) {
        case io::ImageKind::jpeg: {
            auto m = jpeg::parse_jpeg(data);
            return jpeg::serialize_jpeg(encrypting ? cipher::encrypt_jpeg(m, key)
                                                   : cipher::decrypt_jpeg(m, key));
        }
        case io::ImageKind::gif: {
            auto m = gif::parse_gif(data);
            return gif::serialize_gif(encrypting ? cipher::encrypt_gif(m, key)
                                                 : cipher::decrypt_gif(m, key));
        }
        default:
            raise(Errc::corrupt_stream, "input is neither JPEG nor GIF");
    }
}

BitString payload_of(const std::vector<uint8_t>& data) {
    switch (io::sniff_magic(data)) {
        case io::ImageKind::jpeg:
            return cipher::jpeg_payload_bits(jpeg::parse_jpeg(data));
        case io::ImageKind::gif:
            return cipher::gif_payload_bits(gif::parse_gif(data));
        default:
            raise(Errc::corrupt_stream, "input is neither JPEG nor GIF");
    }
}

} // namespace

PYBIND11_MODULE(_bakercrypt, m) {
    m.doc() = "chaotic lossless image cipher for baseline JPEG and GIF";

    py::register_exception<Error>(m, "CipherError");

    py::class_<chaos::KeyMaterial>(m, "Key")
        .def(py::init([](double x0, double y0, uint32_t k, uint32_t t, uint32_t rounds,
                         uint32_t warmup) {
                 return chaos::KeyMaterial{x0, y0, k, t, rounds, warmup};
             }),
             py::arg("x0"), py::arg("y0"), py::arg("k") = 1, py::arg("t") = 1,
             py::arg("rounds") = 1, py::arg("warmup") = 100)
        .def_readwrite("x0", &chaos::KeyMaterial::x0)
        .def_readwrite("y0", &chaos::KeyMaterial::y0)
        .def_readwrite("k", &chaos::KeyMaterial::k)
        .def_readwrite("t", &chaos::KeyMaterial::t)
        .def_readwrite("rounds", &chaos::KeyMaterial::rounds)
        .def_readwrite("warmup", &chaos::KeyMaterial::warmup)
        .def("__eq__",
             [](const chaos::KeyMaterial& a, const chaos::KeyMaterial& b) { return a == b; })
        .def("__repr__", [](const chaos::KeyMaterial& k) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "Key(x0=%.17g, y0=%.17g, k=%u, t=%u, rounds=%u, warmup=%u)", k.x0,
                          k.y0, k.k, k.t, k.rounds, k.warmup);
            return std::string(buf);
        });

    m.def("validate_key", &chaos::validate_key, py::arg("key"),
          "raise CipherError unless the key is usable");

    m.def(
        "keystream",
        [](const chaos::KeyMaterial& key, uint64_t count, uint32_t n) {
            auto gen = chaos::make_generator(key);
            return gen.keystream(count, n);
        },
        py::arg("key"), py::arg("count"), py::arg("n"),
        "quantized post-warm-up keystream values in [0, n)");

    m.def(
        "iterates",
        [](const chaos::KeyMaterial& key, uint64_t count) {
            auto gen = chaos::make_generator(key);
            std::vector<double> out;
            out.reserve(count);
            for (uint64_t i = 0; i < count; ++i) out.push_back(gen.next_z());
            return out;
        },
        py::arg("key"), py::arg("count"), "raw post-warm-up compound-map iterates");

    m.def("parse_key", &chaos::parse_key_text, py::arg("text"),
          "parse the five/six-line key file format");
    m.def("format_key", &chaos::format_key_text, py::arg("key"),
          "render a key in the key file format");

    m.def(
        "encrypt",
        [](const py::bytes& data, const chaos::KeyMaterial& key) {
            return to_bytes(crypt(to_vec(data), key, true));
        },
        py::arg("data"), py::arg("key"), "encrypt a JPEG or GIF byte string");
    m.def(
        "decrypt",
        [](const py::bytes& data, const chaos::KeyMaterial& key) {
            return to_bytes(crypt(to_vec(data), key, false));
        },
        py::arg("data"), py::arg("key"), "decrypt a JPEG or GIF byte string");

    m.def(
        "image_info",
        [](const py::bytes& data) {
            auto bytes = to_vec(data);
            py::dict d;
            switch (io::sniff_magic(bytes)) {
                case io::ImageKind::jpeg: {
                    auto mm = jpeg::parse_jpeg(bytes);
                    d["format"] = "jpeg";
                    d["width"] = mm.width;
                    d["height"] = mm.height;
                    py::list comps;
                    for (const auto& c : mm.components) {
                        py::dict cd;
                        cd["h"] = c.h;
                        cd["v"] = c.v;
                        cd["block_rows"] = c.rows;
                        cd["block_cols"] = c.cols;
                        comps.append(cd);
                    }
                    d["components"] = comps;
                    break;
                }
                case io::ImageKind::gif: {
                    auto mm = gif::parse_gif(bytes);
                    d["format"] = "gif";
                    d["width"] = mm.width;
                    d["height"] = mm.height;
                    py::list frames;
                    for (size_t i = 0; i < mm.frames.size(); ++i) {
                        const auto& f = mm.frames[i];
                        py::dict fd;
                        fd["width"] = f.width;
                        fd["height"] = f.height;
                        fd["interlaced"] = f.interlaced;
                        fd["local_palette"] = f.local_palette.has_value();
                        fd["palette_size"] = mm.active_palette(i).size();
                        frames.append(fd);
                    }
                    d["frames"] = frames;
                    break;
                }
                default:
                    raise(Errc::corrupt_stream, "input is neither JPEG nor GIF");
            }
            return d;
        },
        py::arg("data"), "structural summary of a JPEG or GIF byte string");

    m.def(
        "analyze",
        [](const py::bytes& subject, const std::optional<py::bytes>& reference) {
            auto sbytes = to_vec(subject);
            switch (io::sniff_magic(sbytes)) {
                case io::ImageKind::jpeg: {
                    auto s = jpeg::parse_jpeg(sbytes);
                    std::optional<jpeg::JpegModel> r;
                    if (reference) r = jpeg::parse_jpeg(to_vec(*reference));
                    return analysis::to_json(analysis::analyze(s, r ? &*r : nullptr));
                }
                case io::ImageKind::gif: {
                    auto s = gif::parse_gif(sbytes);
                    std::optional<gif::GifModel> r;
                    if (reference) r = gif::parse_gif(to_vec(*reference));
                    return analysis::to_json(analysis::analyze(s, r ? &*r : nullptr));
                }
                default:
                    raise(Errc::corrupt_stream, "input is neither JPEG nor GIF");
            }
        },
        py::arg("subject"), py::arg("reference") = py::none(),
        "JSON metrics report; reference enables NPCR/UACI/avalanche");

    m.def(
        "payload_bits",
        [](const py::bytes& data) {
            auto bits = payload_of(to_vec(data));
            return py::make_tuple(to_bytes(bits.bytes), bits.nbits);
        },
        py::arg("data"), "(packed MSB-first payload, bit count) of an image");

    m.def(
        "nist_subset",
        [](const py::bytes& packed, uint64_t nbits) {
            BitString b;
            b.bytes = to_vec(packed);
            if (nbits > uint64_t(b.bytes.size()) * 8)
                raise(Errc::insufficient_bits, "bit count exceeds the packed data");
            b.nbits = nbits;
            auto rep = nist::nist_subset(b);
            py::dict d;
            d["advisory"] = rep.advisory;
            d["all_pass"] = rep.all_pass;
            py::list tests;
            for (const auto& t : rep.tests)
                tests.append(py::make_tuple(t.name, t.p_value, t.pass));
            d["tests"] = tests;
            return d;
        },
        py::arg("packed"), py::arg("nbits"),
        "five-test SP 800-22 battery over packed MSB-first bits");
}
