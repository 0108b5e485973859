use l2euler::acceptance::{criterion_count, run_all, summary, Goldens};

#[test]
fn acceptance_suite() {
    let reports = run_all(&Goldens::default());
    for r in &reports {
        println!("{r}");
    }
    println!("{}", summary(&reports));
    assert_eq!(reports.len(), criterion_count());
    assert_eq!(criterion_count(), 14);
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
