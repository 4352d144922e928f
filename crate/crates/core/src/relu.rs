//! Exact hybrid-zonotope graphs of feedforward ReLU networks.
//!
//! Each neuron's graph `{(t, max(0, t)) | t ∈ [lo, hi]}` is the union of two
//! segments built with the sharpness-preserving union. Layers are chained by
//! taking the Cartesian product of the current graph with the neuron graphs
//! and coupling preactivations to `W a + b` with a generalized intersection.
//! Preactivation ranges come from interval arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{hstack, Mat, Vector};
use crate::ops::{
    affine_map, cartesian_product, generalized_intersection, halfspace_intersection, linear_map,
    union,
};
use crate::set::{ConstrainedZonotope, FactorForm, HybridZonotope};

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Mat,
    pub bias: Vector,
}

/// Every layer but the last is followed by a ReLU; the last is affine.
#[derive(Debug, Clone, PartialEq)]
pub struct ReluNetwork {
    layers: Vec<Layer>,
    input_box: Vec<(f64, f64)>,
}

impl ReluNetwork {
    pub fn new(layers: Vec<Layer>, input_box: Vec<(f64, f64)>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidInput("network has no layers".into()));
        }
        if input_box.is_empty() {
            return Err(Error::InvalidInput("network input box is empty".into()));
        }
        for &(lo, hi) in &input_box {
            if !(lo <= hi) {
                return Err(Error::EmptyInterval { lo, hi });
            }
        }
        let mut width = input_box.len();
        for layer in &layers {
            check_dim("layer weight columns vs previous width", width, layer.weights.ncols())?;
            check_dim("layer bias length vs weight rows", layer.weights.nrows(), layer.bias.len())?;
            width = layer.weights.nrows();
        }
        Ok(Self { layers, input_box })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_box(&self) -> &[(f64, f64)] {
        &self.input_box
    }

    pub fn input_dim(&self) -> usize {
        self.input_box.len()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").weights.nrows()
    }

    pub fn hidden_neurons(&self) -> usize {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(|l| l.weights.nrows())
            .sum()
    }

    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let mut a = Vector::from_column_slice(x);
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            a = &layer.weights * a + &layer.bias;
            if i < last {
                a.apply(|v| *v = v.max(0.0));
            }
        }
        a.iter().copied().collect()
    }
}

/// Interval image of `W [lo, hi] + b`.
fn interval_affine(layer: &Layer, lo: &[f64], hi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let w = &layer.weights;
    let mut out_lo = layer.bias.iter().copied().collect::<Vec<_>>();
    let mut out_hi = out_lo.clone();
    for i in 0..w.nrows() {
        for j in 0..w.ncols() {
            let (a, b) = (w[(i, j)] * lo[j], w[(i, j)] * hi[j]);
            out_lo[i] += a.min(b);
            out_hi[i] += a.max(b);
        }
    }
    (out_lo, out_hi)
}

fn segment(from: [f64; 2], to: [f64; 2]) -> HybridZonotope {
    let g = Mat::from_column_slice(2, 1, &[to[0] - from[0], to[1] - from[1]]);
    ConstrainedZonotope::zonotope(g, Vector::from_column_slice(&from), FactorForm::Zo)
        .expect("2x1 generator")
        .to_hybrid()
}

/// Graph of `max(0, t)` over `[lo, hi]` in 01 form. When the interval
/// straddles zero this is the union of `{(t, 0) | t ∈ [lo, 0]}` and
/// `{(t, t) | t ∈ [0, hi]}` with one binary per branch; otherwise it is a
/// single segment.
pub fn relu_graph_1d(lo: f64, hi: f64) -> Result<HybridZonotope> {
    if !(lo <= hi) {
        return Err(Error::EmptyInterval { lo, hi });
    }
    if lo >= 0.0 {
        return Ok(segment([lo, lo], [hi, hi]));
    }
    if hi <= 0.0 {
        return Ok(segment([lo, 0.0], [hi, 0.0]));
    }
    union(&[segment([lo, 0.0], [0.0, 0.0]), segment([0.0, 0.0], [hi, hi])])
}

/// `{(x, N(x)) | x ∈ input_box}` in 01 form.
pub fn network_graph(net: &ReluNetwork) -> Result<HybridZonotope> {
    let n_in = net.input_dim();
    let lo: Vec<f64> = net.input_box.iter().map(|b| b.0).collect();
    let hi: Vec<f64> = net.input_box.iter().map(|b| b.1).collect();
    let input = ConstrainedZonotope::interval_box(&lo, &hi, FactorForm::Zo)?.to_hybrid();

    // (x, a) with a = x initially.
    let dup = crate::linalg::vstack(n_in, &[&Mat::identity(n_in, n_in), &Mat::identity(n_in, n_in)]);
    let mut graph = linear_map(&input, &dup)?;
    let (mut a_lo, mut a_hi) = (lo, hi);
    let mut width = n_in;

    let last = net.layers.len() - 1;
    for layer in &net.layers[..last] {
        let h = layer.weights.nrows();
        let (t_lo, t_hi) = interval_affine(layer, &a_lo, &a_hi);

        let mut neurons: Option<HybridZonotope> = None;
        for i in 0..h {
            let g = relu_graph_1d(t_lo[i], t_hi[i])?;
            neurons = Some(match neurons {
                None => g,
                Some(acc) => cartesian_product(&acc, &g)?,
            });
        }
        let Some(neurons) = neurons else {
            return Err(Error::InvalidInput("hidden layer with no neurons".into()));
        };
        let joined = cartesian_product(&graph, &neurons)?;
        let dim = n_in + width + 2 * h;

        // t_i - (W a)_i = b_i.
        let mut couple = Mat::zeros(h, dim);
        for i in 0..h {
            for j in 0..width {
                couple[(i, n_in + j)] = -layer.weights[(i, j)];
            }
            couple[(i, n_in + width + 2 * i)] = 1.0;
        }
        let bias = ConstrainedZonotope::point(layer.bias.as_slice(), FactorForm::Zo).to_hybrid();
        let coupled = generalized_intersection(&joined, &bias, &couple)?;

        // Keep (x, s).
        let mut keep = Mat::zeros(n_in + h, dim);
        for i in 0..n_in {
            keep[(i, i)] = 1.0;
        }
        for i in 0..h {
            keep[(n_in + i, n_in + width + 2 * i + 1)] = 1.0;
        }
        graph = linear_map(&coupled, &keep)?;
        a_lo = t_lo.iter().map(|v| v.max(0.0)).collect();
        a_hi = t_hi.iter().map(|v| v.max(0.0)).collect();
        width = h;
    }

    let out = &net.layers[last];
    let n_out = out.weights.nrows();
    let mut map = Mat::zeros(n_in + n_out, n_in + width);
    for i in 0..n_in {
        map[(i, i)] = 1.0;
    }
    map.view_mut((n_in, n_in), (n_out, width)).copy_from(&out.weights);
    let offset = crate::linalg::vcat(&Vector::zeros(n_in), &out.bias);
    affine_map(&graph, &map, &offset)
}

/// `{x ∈ input_box | N(x) ≥ threshold}` for a scalar-output network.
pub fn level_set_above(net: &ReluNetwork, threshold: f64) -> Result<HybridZonotope> {
    check_dim("level_set_above: network output dimension", 1, net.output_dim())?;
    let graph = network_graph(net)?;
    let n = net.input_dim();
    let mut normal = vec![0.0; n + 1];
    normal[n] = 1.0;
    let cut = halfspace_intersection(&graph, &normal, threshold)?;
    let project = hstack(n, &[&Mat::identity(n, n), &Mat::zeros(n, 1)]);
    linear_map(&cut, &project)
}

/// Network file layout: `{"layers":[{"W":[[..]],"b":[..]}], "input_box":[[lo,hi],..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub layers: Vec<LayerFile>,
    pub input_box: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerFile {
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl TryFrom<&NetworkFile> for ReluNetwork {
    type Error = Error;

    fn try_from(file: &NetworkFile) -> Result<Self> {
        let layers = file
            .layers
            .iter()
            .map(|l| {
                let weights = crate::io::matrix_from_rows(&l.w, Some(l.b.len()), "W")?;
                Ok(Layer {
                    weights,
                    bias: Vector::from_column_slice(&l.b),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ReluNetwork::new(layers, file.input_box.iter().map(|b| (b[0], b[1])).collect())
    }
}

impl From<&ReluNetwork> for NetworkFile {
    fn from(net: &ReluNetwork) -> Self {
        NetworkFile {
            layers: net
                .layers
                .iter()
                .map(|l| LayerFile {
                    w: crate::linalg::to_rows(&l.weights),
                    b: l.bias.iter().copied().collect(),
                })
                .collect(),
            input_box: net.input_box.iter().map(|&(lo, hi)| [lo, hi]).collect(),
        }
    }
}

/// Shipped 2-2-1 demo network on `[-2, 2]²`:
/// `N(x) = relu(x1 + x2/2 - 1) + relu(-x1/2 - x2 - 1)`. Its level set at
/// `0.5` is two disjoint corner regions, so it is nonconvex.
pub fn demo_network() -> ReluNetwork {
    ReluNetwork::new(
        vec![
            Layer {
                weights: Mat::from_row_slice(2, 2, &[1.0, 0.5, -0.5, -1.0]),
                bias: Vector::from_vec(vec![-1.0, -1.0]),
            },
            Layer {
                weights: Mat::from_row_slice(1, 2, &[1.0, 1.0]),
                bias: Vector::zeros(1),
            },
        ],
        vec![(-2.0, 2.0), (-2.0, 2.0)],
    )
    .expect("consistent demo network")
}
