//! Every example runs to completion.

#[path = "../examples/batch_report.rs"]
mod batch_report;
#[path = "../examples/chern_connection.rs"]
mod chern_connection;
#[path = "../examples/conformal_residual.rs"]
mod conformal_residual;
#[path = "../examples/conformal_tensors.rs"]
mod conformal_tensors;
#[path = "../examples/curvature.rs"]
mod curvature;
#[path = "../examples/cylinder_cases.rs"]
mod cylinder_cases;
#[path = "../examples/einstein_check.rs"]
mod einstein_check;
#[path = "../examples/fundamental_tensor.rs"]
mod fundamental_tensor;
#[path = "../examples/taylor_jets.rs"]
mod taylor_jets;
#[path = "../examples/warped_products.rs"]
mod warped_products;

#[test]
fn examples_run() {
    batch_report::run_example().expect("batch_report");
    chern_connection::run_example().expect("chern_connection");
    conformal_residual::run_example().expect("conformal_residual");
    conformal_tensors::run_example().expect("conformal_tensors");
    curvature::run_example().expect("curvature");
    cylinder_cases::run_example().expect("cylinder_cases");
    einstein_check::run_example().expect("einstein_check");
    fundamental_tensor::run_example().expect("fundamental_tensor");
    taylor_jets::run_example().expect("taylor_jets");
    warped_products::run_example().expect("warped_products");
}
