use qdialogue_demo::{detection_curve_json, dialogue_transcript_json, simulate_json, MAX_BROWSER_TRIALS};

#[test]
fn curve_has_requested_points() {
    let v: serde_json::Value = serde_json::from_str(&detection_curve_json(0.5, 0.75, 16, 0.25).unwrap()).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 16);
    assert!((points[0]["closed_form"].as_f64().unwrap() - 0.609375).abs() < 1e-12);
    assert!((v["eve_entropy_bits"].as_f64().unwrap() - 0.811278).abs() < 1e-6);
    assert!(detection_curve_json(1.0, 0.5, 4, 0.0).is_err());
}

#[test]
fn simulate_matches_the_library_document() {
    let text = simulate_json("disturb-pauli4", 0.0, 0.5, 8, 300, 3).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "qdialogue.results.v1");
    assert_eq!(v["config"]["attack"]["name"], "disturb-pauli4");
    assert_eq!(text, simulate_json("disturb-pauli4", 0.0, 0.5, 8, 300, 3).unwrap());
    assert!(simulate_json("none", 0.0, 0.5, 8, MAX_BROWSER_TRIALS + 1, 1).is_err());
    assert!(simulate_json("wiretap", 0.0, 0.5, 8, 10, 1).is_err());
}

#[test]
fn transcript_lists_runs() {
    let v: serde_json::Value =
        serde_json::from_str(&dialogue_transcript_json("entangle-measure", 0.25, 0.5, 6, 7).unwrap()).unwrap();
    let runs = v["transcript"]["runs"].as_array().unwrap();
    assert_eq!(runs.len(), v["eve"]["runs"].as_array().unwrap().len());
    assert!(!runs.is_empty());
}
