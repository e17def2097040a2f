use super::MentionAttributes;
use crate::coref::Clustering;
use crate::error::{Error, Result};

/// True iff the entity's mentions name exactly one distinct country, that
/// country is `country`, and at least one mention is an attack agent.
pub fn entity_country_attack_match(entity: &[usize], mentions: &[MentionAttributes], country: &str) -> Result<bool> {
    let mut named: Option<&str> = None;
    let mut attacker = false;
    for &m in entity {
        let attrs = mentions.get(m).ok_or_else(|| Error::input(format!("mention {m} not in document")))?;
        attacker |= attrs.attack_agent;
        for c in &attrs.countries {
            match named {
                None => named = Some(c),
                Some(prev) if prev != c => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(attacker && named == Some(country))
}

/// 1 if any entity of the clustering matches.
pub fn doc_attack_indicator(mentions: &[MentionAttributes], country: &str, clustering: &Clustering) -> Result<bool> {
    for entity in &clustering.entities {
        if entity_country_attack_match(entity, mentions, country)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mention(countries: &[&str], attack: bool) -> MentionAttributes {
        MentionAttributes { countries: countries.iter().map(|c| c.to_string()).collect(), attack_agent: attack }
    }

    #[test]
    fn country_and_attacker_in_same_entity() {
        let ms = [mention(&["FRA"], false), mention(&[], true)];
        assert!(entity_country_attack_match(&[0, 1], &ms, "FRA").unwrap());
        assert!(!entity_country_attack_match(&[0, 1], &ms, "USA").unwrap());
    }

    #[test]
    fn two_countries_disqualify() {
        let ms = [mention(&["FRA"], true), mention(&["USA"], false)];
        assert!(!entity_country_attack_match(&[0, 1], &ms, "FRA").unwrap());
        assert!(!entity_country_attack_match(&[0, 1], &ms, "USA").unwrap());
        let ms = [mention(&["FRA", "USA"], true)];
        assert!(!entity_country_attack_match(&[0], &ms, "FRA").unwrap());
    }

    #[test]
    fn no_attacker_no_match() {
        let ms = [mention(&["FRA"], false), mention(&["FRA"], false)];
        assert!(!entity_country_attack_match(&[0, 1], &ms, "FRA").unwrap());
    }

    #[test]
    fn unknown_mention_is_an_error() {
        assert!(entity_country_attack_match(&[3], &[mention(&[], true)], "FRA").is_err());
    }

    #[test]
    fn document_indicator() {
        let empty = Clustering { entities: vec![] };
        assert!(!doc_attack_indicator(&[], "IRQ", &empty).unwrap());

        // A country-tagged mention and a later attacking mention of the same person.
        let ms = [mention(&["IRQ"], false), mention(&[], true), mention(&["USA"], false)];
        let joined = Clustering { entities: vec![vec![0, 1], vec![2]] };
        let split = Clustering { entities: vec![vec![0], vec![1], vec![2]] };
        assert!(doc_attack_indicator(&ms, "IRQ", &joined).unwrap());
        assert!(!doc_attack_indicator(&ms, "USA", &joined).unwrap());
        assert!(!doc_attack_indicator(&ms, "IRQ", &split).unwrap());
    }
}
