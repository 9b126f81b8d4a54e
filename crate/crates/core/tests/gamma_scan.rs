use delpezzo::classify::gamma_scan;

#[test]
fn three_classes_of_rational_galois_images() {
    let scan = gamma_scan();
    eprintln!("{}", serde_json::to_string_pretty(&scan).unwrap());
    assert_eq!(scan.centralizer_order, 216);
    assert_eq!(scan.classes.len(), 3);
    let mut names: Vec<String> = scan.classes.iter().map(|c| c.matches.clone().expect("named class")).collect();
    names.sort();
    assert_eq!(names, ["<r, c*gamma, s>", "<r, c*gamma>", "<r, cs*gamma>"]);
}
