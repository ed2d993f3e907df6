#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "twri/array_file.hpp"
#include "twri/channel.hpp"
#include "twri/dae.hpp"
#include "twri/metrics.hpp"
#include "twri/radarsim.hpp"
#include "twri/target.hpp"

namespace py = pybind11;
using namespace twri;

namespace {

FrontalImage image_from_array(const py::array_t<double>& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2D array");
  FrontalImage img = make_image(static_cast<int>(a.shape(0)),
                                static_cast<int>(a.shape(1)));
  auto r = a.unchecked<2>();
  for (int i = 0; i < img.rows; ++i)
    for (int j = 0; j < img.cols; ++j) img.at(i, j) = r(i, j);
  return img;
}

SlabSpec slab_from_layers(
    const std::vector<std::tuple<double, double, double>>& layers) {
  SlabSpec s;
  for (const auto& [d, eps, sig] : layers) s.layers.push_back({d, eps, sig});
  return s;
}

py::dict model_to_dict(const DaeModel& m) {
  py::dict d;
  d["w1"] = m.w1;
  d["w2"] = m.w2;
  d["mapping"] = to_string(m.mapping);
  d["lambda"] = m.lambda;
  d["objective_log"] = m.objective_log;
  d["clamp_count"] = m.clamp_count;
  d["train_seconds"] = m.train_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(twri, m) {
  m.doc() = "Through-wall radar frontal imaging and DAE mitigation";

  m.def(
      "nmse",
      [](const py::array_t<double>& ref, const py::array_t<double>& test) {
        return nmse(image_from_array(ref), image_from_array(test));
      },
      py::arg("ref"), py::arg("test"));

  m.def(
      "ssim",
      [](const py::array_t<double>& ref, const py::array_t<double>& test) {
        return ssim(image_from_array(ref), image_from_array(test));
      },
      py::arg("ref"), py::arg("test"));

  m.def(
      "free_space_transfer",
      [](const std::vector<double>& src, const std::vector<double>& pt,
         double k, int dims) {
        if (src.size() == 2 && pt.size() == 2)
          return free_space_transfer(Vec2{src[0], src[1]}, Vec2{pt[0], pt[1]},
                                     k, dims);
        if (src.size() == 3 && pt.size() == 3)
          return free_space_transfer(Vec3{src[0], src[1], src[2]},
                                     Vec3{pt[0], pt[1], pt[2]}, k, dims);
        throw std::invalid_argument("positions must both be 2D or both 3D");
      },
      py::arg("src"), py::arg("pt"), py::arg("k"), py::arg("dims"));

  m.def("scale_factor_2d_to_3d", &scale_factor_2d_to_3d, py::arg("d2"),
        py::arg("d3"), py::arg("k"));

  m.def(
      "slab_transmission",
      [](double f, const std::vector<std::tuple<double, double, double>>& layers,
         double incidence_rad) {
        return slab_transmission(f, slab_from_layers(layers), incidence_rad);
      },
      py::arg("f"), py::arg("layers"), py::arg("incidence_rad") = 0.0);

  m.def(
      "synth_walk",
      [](double height, double stride_hz, double fs, double duration,
         double standoff, double array_height, double phase) {
        WalkParams p;
        p.height = height;
        p.stride_hz = stride_hz;
        p.fs = fs;
        p.duration = duration;
        p.standoff = standoff;
        p.array_height = array_height;
        p.phase = phase;
        const ScattererTrack tr = synth_walk(p);
        const std::size_t nb = tr.n_scatterers(), ns = tr.n_samples();
        py::array_t<double> pos({nb, ns, std::size_t{3}});
        auto w = pos.mutable_unchecked<3>();
        for (std::size_t b = 0; b < nb; ++b)
          for (std::size_t n = 0; n < ns; ++n) {
            w(b, n, 0) = tr.positions[b][n].x;
            w(b, n, 1) = tr.positions[b][n].y;
            w(b, n, 2) = tr.positions[b][n].z;
          }
        return py::make_tuple(tr.names, pos);
      },
      py::arg("height") = 1.75, py::arg("stride_hz") = 1.25,
      py::arg("fs") = 1000.0, py::arg("duration") = 0.8,
      py::arg("standoff") = 2.5, py::arg("array_height") = 1.0,
      py::arg("phase") = 0.0);

  m.def(
      "train_dae",
      [](const Eigen::MatrixXd& y, const Eigen::MatrixXd& yhat, int r,
         double lambda, const std::string& mapping, int max_sweeps, double tol,
         std::uint64_t init_seed) {
        TrainConfig cfg;
        cfg.r = r;
        cfg.lambda = lambda;
        cfg.mapping = mapping_from_string(mapping);
        cfg.max_sweeps = max_sweeps;
        cfg.tol = tol;
        cfg.init_seed = init_seed;
        return model_to_dict(train(y, yhat, cfg));
      },
      py::arg("y"), py::arg("yhat"), py::arg("r"), py::arg("lambda_") = 1.0,
      py::arg("mapping") = "linear", py::arg("max_sweeps") = 200,
      py::arg("tol") = 1e-6, py::arg("init_seed") = 7);

  m.def(
      "denoise",
      [](const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
         const std::string& mapping, const Eigen::MatrixXd& yhat,
         bool renormalize) {
        DaeModel model;
        model.w1 = w1;
        model.w2 = w2;
        model.mapping = mapping_from_string(mapping);
        return denoise(model, yhat, renormalize);
      },
      py::arg("w1"), py::arg("w2"), py::arg("mapping"), py::arg("yhat"),
      py::arg("renormalize") = true);

  m.def(
      "write_array",
      [](const std::string& path, const py::array& arr,
         const std::string& label) {
        std::vector<std::int64_t> shape(arr.ndim());
        for (py::ssize_t i = 0; i < arr.ndim(); ++i) shape[i] = arr.shape(i);
        if (py::isinstance<py::array_t<std::complex<double>>>(arr)) {
          const auto a =
              py::array_t<std::complex<double>, py::array::c_style |
                                                    py::array::forcecast>(arr);
          std::vector<cd> buf(a.data(), a.data() + a.size());
          write_array(path, shape, buf, label);
        } else {
          const auto a =
              py::array_t<double,
                          py::array::c_style | py::array::forcecast>(arr);
          std::vector<double> buf(a.data(), a.data() + a.size());
          write_array(path, shape, buf, label);
        }
      },
      py::arg("path"), py::arg("arr"), py::arg("label") = "");

  m.def(
      "read_array",
      [](const std::string& path) -> py::object {
        const ArrayData arr = read_array(path);
        std::vector<py::ssize_t> shape(arr.shape.begin(), arr.shape.end());
        if (arr.dtype == Dtype::c128) {
          py::array_t<std::complex<double>> out(shape);
          std::memcpy(out.mutable_data(), arr.cplx.data(),
                      arr.cplx.size() * sizeof(cd));
          return py::make_tuple(out, arr.label);
        }
        py::array_t<double> out(shape);
        std::memcpy(out.mutable_data(), arr.reals.data(),
                    arr.reals.size() * sizeof(double));
        return py::make_tuple(out, arr.label);
      },
      py::arg("path"));
}
