#!/usr/bin/env python3
"""Generate the fixture corpus: news_50.jsonl, gazetteer.txt and gold.json.

The corpus is authored here sentence by sentence, so the gold file records
what each article is expected to yield (sentence texts and indices, entity
mentions, quotations, captured professions, per-article entity sets)
independently of the library: tests rebuild index postings and graph counts
from the gold data alone. Running the script twice produces identical bytes.

The script ends with a verification pass that runs the real pipeline and
diffs it against the gold data; mismatches are reported and make it exit
nonzero so authoring mistakes are caught immediately.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

CANONICAL = {
    "ana-silva": "Ana Silva",
    "pedro-costa": "Pedro Costa",
    "marta-lopes": "Marta Lopes",
    "rui-alves": "Rui Alves",
    "carla-mendes": "Carla Mendes",
    "tiago-fonseca": "Tiago Fonseca",
    "cristiano-ronaldo": "Cristiano Ronaldo",
    "lionel-messi": "Lionel Messi",
    "jose-mourinho": "José Mourinho",
    "iker-casillas": "Iker Casillas",
    "maria-santos": "Maria Santos",
    "joao-pereira": "João Pereira",
    "helena-faria": "Helena Faria",
}

ALIASES = {
    "Ronaldo": "Cristiano Ronaldo",
    "Messi": "Lionel Messi",
    "Mourinho": "José Mourinho",
    "Casillas": "Iker Casillas",
    "Silva": "Ana Silva",
    "Alves": "Rui Alves",
    "Pereira": "João Pereira",
    "Santos": "Maria Santos",
}


def S(text, ents=(), quote=None, prof=None):
    """One authored sentence: text, entity ids, optional quote or captured
    profession expectation."""
    return {"text": text, "ents": sorted(set(ents)), "quote": quote, "prof": prof}


def A(doc_id, source, category, published_at, title, title_ents, paragraphs, html=False):
    return {
        "doc_id": doc_id,
        "source": source,
        "category": category,
        "published_at": published_at,
        "title": title,
        "title_ents": sorted(set(title_ents)),
        "paragraphs": paragraphs,
        "html": html,
    }


ARTICLES = [
    # --- January/February corruption cluster around Ana Silva -------------
    A("a01", "lisbon-herald", "politics", "2010-01-05T09:15:00Z",
      "Ana Silva faces corruption inquiry", ["ana-silva"],
      [[
          S("Ana Silva, opposition leader, faces a corruption inquiry over public contracts.",
            ["ana-silva"], prof=("ana-silva", "opposition leader")),
          S("Investigators searched two offices linked to the contracts on Monday."),
          S("Silva said that the accusations are baseless.", ["ana-silva"],
            quote=("ana-silva", "indirect", "the accusations are baseless.")),
      ]]),
    A("a02", "diario-do-sul", "politics", "2010-01-08T14:00:00Z",
      "Caso dos contratos ameaça Ana Silva", ["ana-silva"],
      [[
          S("O caso dos contratos públicos ameaça a carreira de Ana Silva.", ["ana-silva"]),
          S("Ana Silva disse que nunca assinou os contratos.", ["ana-silva"],
            quote=("ana-silva", "indirect", "nunca assinou os contratos.")),
          S("A oposição exige respostas rápidas no parlamento."),
      ]]),
    A("a03", "lisbon-herald", "politics", "2010-01-12T10:30:00Z",
      "Prosecutor outlines corruption case", [],
      [[
          S("Marta Lopes, lead prosecutor, outlined the case against the opposition.",
            ["marta-lopes"], prof=("marta-lopes", "lead prosecutor")),
          S("The file cites payments routed through three shell companies."),
          S("«The evidence is solid», said Marta Lopes.", ["marta-lopes"],
            quote=("marta-lopes", "direct", "The evidence is solid")),
      ]]),
    A("a04", "lisbon-herald", "politics", "2010-01-15T18:45:00Z",
      "Parliament debates the Silva affair", ["ana-silva"],
      [[
          S("Parliament debated the affair surrounding Ana Silva for six hours.", ["ana-silva"]),
          S("Pedro Costa, finance minister, defended the government procurement rules.",
            ["pedro-costa"], prof=("pedro-costa", "finance minister")),
          S("Pedro Costa said that the budget process remains transparent.", ["pedro-costa"],
            quote=("pedro-costa", "indirect", "the budget process remains transparent.")),
      ]]),
    A("a05", "diario-do-sul", "politics", "2010-01-19T08:00:00+01:00",
      "Ana Silva responde às acusações de corrupção", ["ana-silva"],
      [[
          S("Ana Silva respondeu ontem às acusações de corrupção no parlamento.", ["ana-silva"]),
          S("«Não recebi qualquer pagamento», declarou Ana Silva.", ["ana-silva"],
            quote=("ana-silva", "direct", "Não recebi qualquer pagamento")),
          S("O processo segue para a fase de instrução."),
      ]]),
    A("a06", "lisbon-herald", "politics", "2010-01-23T11:20:00Z",
      "Auditors trace payments in Silva case", ["ana-silva"],
      [[
          S("Auditors traced the payments at the centre of the corruption case against Ana Silva.",
            ["ana-silva"]),
          S("Two former aides agreed to testify before the committee."),
          S("Marta Lopes told reporters that the inquiry will widen.", ["marta-lopes"]),
      ]]),
    A("a07", "diario-do-sul", "politics", "2010-01-27T16:10:00Z",
      "Comissão ouve Ana Silva esta semana", ["ana-silva"],
      [[
          S("A comissão parlamentar ouve Ana Silva esta semana sobre os contratos.", ["ana-silva"]),
          S("Ana Silva garantiu que vai colaborar com a justiça.", ["ana-silva"],
            quote=("ana-silva", "indirect", "vai colaborar com a justiça.")),
      ]]),
    A("a08", "lisbon-herald", "politics", "2010-02-02T09:40:00Z",
      "Corruption file reaches the courts", [],
      [[
          S("The corruption file against Ana Silva reached the courts on Tuesday.", ["ana-silva"]),
          S("Dr. Ana Silva arrived with her legal team before sunrise.", ["ana-silva"]),
          S("The hearing was adjourned until March."),
      ]]),
    A("a09", "diario-do-sul", "politics", "2010-02-06T13:00:00Z",
      "Defesa de Ana Silva contesta provas", ["ana-silva"],
      [[
          S("A defesa de Ana Silva contestou as provas reunidas pela acusação.", ["ana-silva"]),
          S("«As escutas são ilegais», afirmou Ana Silva.", ["ana-silva"],
            quote=("ana-silva", "direct", "As escutas são ilegais")),
          S("O tribunal decide no próximo mês."),
      ]]),
    A("a10", "lisbon-herald", "politics", "2010-02-10T10:00:00Z",
      "Silva allies rally before hearing", ["ana-silva"],
      [[
          S("Allies of Ana Silva rallied outside the courthouse before the corruption hearing.",
            ["ana-silva"]),
          S("Pedro Costa declined to comment on the corruption inquiry.", ["pedro-costa"]),
      ]]),
    A("a11", "lisbon-herald", "politics", "2010-02-14T15:30:00Z",
      "Committee hears contract testimony", [],
      [[
          S("The committee heard testimony about corruption in the disputed contracts."),
          S("Ana Silva and Marta Lopes exchanged sharp words during the session.",
            ["ana-silva", "marta-lopes"]),
          S("The committee chair promised a full report by spring."),
      ]]),
    A("a12", "diario-do-sul", "politics", "2010-02-21T12:00:00Z",
      "Relatório aponta falhas nos contratos", [],
      [[
          S("O relatório preliminar aponta falhas graves nos contratos públicos."),
          S("Ana Silva admitiu que o partido cometeu erros administrativos.", ["ana-silva"],
            quote=("ana-silva", "indirect", "o partido cometeu erros administrativos.")),
      ]]),
    # --- May/June corruption cluster around Rui Alves ---------------------
    A("b01", "porto-gazette", "politics", "2010-05-03T09:00:00Z",
      "Rui Alves named in corruption probe", ["rui-alves"],
      [[
          S("Rui Alves, city mayor, was named in a corruption probe into the stadium works.",
            ["rui-alves"], prof=("rui-alves", "city mayor")),
          S("Alves said that the city followed every rule.", ["rui-alves"],
            quote=("rui-alves", "indirect", "the city followed every rule.")),
      ]]),
    A("b02", "jornal-do-norte", "politics", "2010-05-07T14:30:00Z",
      "Auditoria aperta cerco a Rui Alves", ["rui-alves"],
      [[
          S("A auditoria municipal aperta o cerco ao presidente Rui Alves.", ["rui-alves"]),
          S("Carla Mendes assinou o relatório da auditoria às obras.", ["carla-mendes"]),
          S("O relatório cita pagamentos sem contrato escrito."),
      ]]),
    A("b03", "porto-gazette", "politics", "2010-05-11T10:15:00Z",
      "Auditor flags stadium payments", [],
      [[
          S("Carla Mendes, council auditor, flagged irregular payments in the stadium accounts.",
            ["carla-mendes"], prof=("carla-mendes", "council auditor")),
          S("«The invoices do not match the work done», stated Carla Mendes.", ["carla-mendes"],
            quote=("carla-mendes", "direct", "The invoices do not match the work done")),
          S("The mayor's office promised a detailed reply."),
      ]]),
    A("b04", "porto-gazette", "politics", "2010-05-15T17:00:00Z",
      "Alves defends the stadium contract", ["rui-alves"],
      [[
          S("Rui Alves defended the stadium contract before the city council.", ["rui-alves"]),
          S("Tiago Fonseca, defense lawyer, joined the mayor's legal team.",
            ["tiago-fonseca"], prof=("tiago-fonseca", "defense lawyer")),
          S("Tiago Fonseca said that the corruption claims lack any basis.", ["tiago-fonseca"],
            quote=("tiago-fonseca", "indirect", "the corruption claims lack any basis.")),
      ]]),
    A("b05", "jornal-do-norte", "politics", "2010-05-19T08:30:00+01:00",
      "Rui Alves nega favorecimento nas obras", ["rui-alves"],
      [[
          S("Rui Alves negou qualquer favorecimento nas obras do estádio.", ["rui-alves"]),
          S("«Nunca beneficiei empresa alguma», declarou Rui Alves.", ["rui-alves"],
            quote=("rui-alves", "direct", "Nunca beneficiei empresa alguma")),
      ]]),
    A("b06", "porto-gazette", "politics", "2010-05-23T11:45:00Z",
      "Corruption probe widens at city hall", [],
      [[
          S("The corruption probe at city hall widened to the port contracts."),
          S("Investigators interviewed Rui Alves for five hours on Friday.", ["rui-alves"]),
          S("Carla Mendes delivered a second audit to the prosecutors.", ["carla-mendes"]),
      ]]),
    A("b07", "jornal-do-norte", "politics", "2010-05-27T13:20:00Z",
      "Vereadores pedem demissão de Alves", ["rui-alves"],
      [[
          S("Vários vereadores pediram ontem a demissão de Rui Alves.", ["rui-alves"]),
          S("Rui Alves afirmou que não abandona o cargo.", ["rui-alves"],
            quote=("rui-alves", "indirect", "não abandona o cargo.")),
      ]]),
    A("b08", "porto-gazette", "politics", "2010-06-01T09:10:00Z",
      "City hall releases contract files", [],
      [[
          S("City hall released the contract files at the centre of the corruption probe."),
          S("Rui Alves and Carla Mendes answered questions side by side.",
            ["rui-alves", "carla-mendes"]),
          S("The audit committee will meet again next week."),
      ]]),
    A("b09", "porto-gazette", "politics", "2010-06-08T15:50:00Z",
      "Alves faces confidence vote", ["rui-alves"],
      [[
          S("Rui Alves faces a confidence vote over the corruption findings.", ["rui-alves"]),
          S("Tiago Fonseca warned that the vote has no legal effect.", ["tiago-fonseca"],
            quote=("tiago-fonseca", "indirect", "the vote has no legal effect.")),
      ]]),
    A("b10", "jornal-do-norte", "politics", "2010-06-14T10:05:00Z",
      "Tribunal valida provas da auditoria", [],
      [[
          S("O tribunal validou as provas recolhidas pela auditoria municipal."),
          S("Tiago Fonseca declarou que vai recorrer da decisão.", ["tiago-fonseca"],
            quote=("tiago-fonseca", "indirect", "vai recorrer da decisão.")),
      ]]),
    A("b11", "porto-gazette", "politics", "2010-06-21T12:30:00Z",
      "Mayor survives confidence vote", [],
      [[
          S("The mayor survived the confidence vote by a narrow margin."),
          S("Rui Alves admitted that the stadium budget doubled in two years.", ["rui-alves"],
            quote=("rui-alves", "indirect", "the stadium budget doubled in two years.")),
      ]]),
    A("b12", "porto-gazette", "politics", "2010-06-28T16:40:00Z",
      "Corruption case heads to trial", [],
      [[
          S("The corruption case against Rui Alves heads to trial in September.", ["rui-alves"]),
          S("Carla Mendes will appear as the first witness.", ["carla-mendes"]),
      ]]),
    # --- Sports thread through the whole half-year ------------------------
    A("s01", "madrid-sports", "sports", "2010-01-06T20:00:00Z",
      "Ronaldo leads Ballon d'Or nominees", ["cristiano-ronaldo"],
      [[
          S("Cristiano Ronaldo, Real Madrid forward, leads the Ballon d'Or nominees this season.",
            ["cristiano-ronaldo"], prof=("cristiano-ronaldo", "Real Madrid forward")),
          S("Lionel Messi and Cristiano Ronaldo top the shortlist announced in Paris.",
            ["lionel-messi", "cristiano-ronaldo"]),
          S("Ronaldo said that the award would honour the whole squad.", ["cristiano-ronaldo"],
            quote=("cristiano-ronaldo", "indirect", "the award would honour the whole squad.")),
      ]]),
    A("s02", "bola-diaria", "sports", "2010-01-14T21:30:00Z",
      "Mourinho elogia plantel antes do clássico", ["jose-mourinho"],
      [[
          S("José Mourinho elogiou o plantel na véspera do clássico.", ["jose-mourinho"]),
          S("«O grupo está pronto», disse José Mourinho.", ["jose-mourinho"],
            quote=("jose-mourinho", "direct", "O grupo está pronto")),
      ]]),
    A("s03", "madrid-sports", "sports", "2010-01-21T19:45:00Z",
      "Casillas keeps third clean sheet", ["iker-casillas"],
      [[
          S("Iker Casillas, veteran goalkeeper, kept his third clean sheet in a row.",
            ["iker-casillas"], prof=("iker-casillas", "veteran goalkeeper")),
          S("The defence conceded only four goals all month."),
      ]]),
    A("s04", "madrid-sports", "sports", "2010-01-30T18:00:00Z",
      "Messi answers with a hat-trick", ["lionel-messi"],
      [[
          S("Lionel Messi answered the pressure with a hat-trick against Valencia.",
            ["lionel-messi"]),
          S("Messi said that the team chased every ball.", ["lionel-messi"],
            quote=("lionel-messi", "indirect", "the team chased every ball.")),
      ]]),
    A("s05", "bola-diaria", "sports", "2010-02-04T20:15:00Z",
      "Ronaldo marca dois no dérbi", ["cristiano-ronaldo"],
      [[
          S("Cristiano Ronaldo marcou dois golos no dérbi da capital.", ["cristiano-ronaldo"]),
          S("José Mourinho disse que a equipa mereceu a vitória.", ["jose-mourinho"],
            quote=("jose-mourinho", "indirect", "a equipa mereceu a vitória.")),
      ]]),
    A("s06", "madrid-sports", "sports", "2010-02-11T21:00:00Z",
      "Mourinho plays down title talk", ["jose-mourinho"],
      [[
          S("José Mourinho played down the title talk after the narrow win.", ["jose-mourinho"]),
          S("“The league is decided in May”, declared José Mourinho.", ["jose-mourinho"],
            quote=("jose-mourinho", "direct", "The league is decided in May")),
      ]]),
    A("s07", "madrid-sports", "sports", "2010-02-18T19:30:00Z",
      "Ronaldo and Messi share scoring lead", ["cristiano-ronaldo", "lionel-messi"],
      [[
          S("Cristiano Ronaldo and Lionel Messi share the scoring lead with nineteen goals.",
            ["cristiano-ronaldo", "lionel-messi"]),
          S("Iker Casillas praised both strikers before the international break.",
            ["iker-casillas"]),
      ]]),
    A("s08", "bola-diaria", "sports", "2010-02-26T20:45:00Z",
      "Casillas renova até 2015", ["iker-casillas"],
      [[
          S("Iker Casillas renovou contrato com o clube até 2015.", ["iker-casillas"]),
          S("Casillas afirmou que quer terminar a carreira em Madrid.", ["iker-casillas"],
            quote=("iker-casillas", "indirect", "quer terminar a carreira em Madrid.")),
      ]]),
    A("s09", "madrid-sports", "sports", "2010-03-05T21:10:00Z",
      "Cup draw pairs the old rivals", [],
      [[
          S("The cup draw paired the old rivals for a two-legged semifinal."),
          S("José Mourinho called the draw a fair test for his squad.", ["jose-mourinho"]),
      ]]),
    A("s10", "madrid-sports", "sports", "2010-03-12T20:30:00Z",
      "", [],
      [[
          S("Lionel Messi was rested before the semifinal first leg.", ["lionel-messi"]),
          S("The coach confirmed the squad travels on Monday."),
      ]]),
    A("s11", "bola-diaria", "sports", "2010-03-19T21:45:00Z",
      "Mourinho prepara semifinal com cautela", ["jose-mourinho"],
      [[
          S("José Mourinho preparou a semifinal com a cautela habitual.", ["jose-mourinho"]),
          S("Mourinho garantiu que o plano de jogo está fechado.", ["jose-mourinho"],
            quote=("jose-mourinho", "indirect", "o plano de jogo está fechado.")),
      ]]),
    A("s12", "madrid-sports", "sports", "2010-04-02T19:00:00Z",
      "Ronaldo returns for the second leg", ["cristiano-ronaldo"],
      [[
          S("Cristiano Ronaldo returned to training for the second leg.", ["cristiano-ronaldo"]),
          S("Iker Casillas said that the tie remains open.", ["iker-casillas"],
            quote=("iker-casillas", "indirect", "the tie remains open.")),
      ]]),
    A("s13", "madrid-sports", "sports", "2010-04-16T20:20:00Z",
      "Semifinal ends level after extra time", [],
      [
          [S("The semifinal ended level after extra time in front of eighty thousand fans.")],
          [S("Lionel Messi hit the bar twice in the second half.", ["lionel-messi"])],
      ], html=True),
    A("s14", "bola-diaria", "sports", "2010-04-30T21:30:00Z",
      "Final marcada para o estádio da Luz", [],
      [[
          S("A final ficou marcada para o estádio da Luz em maio."),
          S("Cristiano Ronaldo e Lionel Messi chegam à final como melhores marcadores.",
            ["cristiano-ronaldo", "lionel-messi"]),
      ]]),
    A("s15", "madrid-sports", "sports", "2010-05-22T22:00:00Z",
      "Ronaldo lifts the trophy in the final", ["cristiano-ronaldo"],
      [[
          S("Cristiano Ronaldo lifted the trophy after a two-one win in the final.",
            ["cristiano-ronaldo"]),
          S("\"This final belongs to the fans\", said Cristiano Ronaldo.", ["cristiano-ronaldo"],
            quote=("cristiano-ronaldo", "direct", "This final belongs to the fans")),
          S("José Mourinho embraced every player at the whistle.", ["jose-mourinho"]),
      ]]),
    A("s16", "madrid-sports", "sports", "2010-06-10T18:30:00Z",
      "Ballon d'Or race tightens after the final", [],
      [[
          S("The Ballon d'Or race tightened after the final in Lisbon."),
          S("Cristiano Ronaldo and Lionel Messi remain the leading nominees.",
            ["cristiano-ronaldo", "lionel-messi"]),
      ]]),
    # --- Culture and business filler --------------------------------------
    A("c01", "arts-weekly", "culture", "2010-01-09T12:00:00Z",
      "Maria Santos opens the winter season", ["maria-santos"],
      [[
          S("Maria Santos, fado singer, opened the winter season at the old opera house.",
            ["maria-santos"], prof=("maria-santos", "fado singer")),
          S("The first concert sold out in three hours."),
      ]]),
    A("c02", "mercado-diario", "business", "2010-01-28T09:00:00Z",
      "Economist warns on inflation", [],
      [[
          S("João Pereira, chief economist, warned about rising inflation in the spring.",
            ["joao-pereira"], prof=("joao-pereira", "chief economist")),
          S("Pereira said that prices will climb until summer.", ["joao-pereira"],
            quote=("joao-pereira", "indirect", "prices will climb until summer.")),
      ]]),
    A("c03", "arts-weekly", "culture", "2010-02-08T00:30:00+01:00",
      "Museu recebe retrospetiva de inverno", [],
      [[
          S("Helena Faria apresentou a retrospetiva de inverno do museu.", ["helena-faria"]),
          S("A exposição reúne sessenta obras de doze coleções."),
      ]]),
    A("c04", "arts-weekly", "culture", "2010-02-24T11:00:00Z",
      "Museum extends the winter exhibition", [],
      [[
          S("Helena Faria, museum director, extended the winter exhibition by a month.",
            ["helena-faria"], prof=("helena-faria", "museum director")),
          S("Helena Faria said that the demand surprised everyone.", ["helena-faria"],
            quote=("helena-faria", "indirect", "the demand surprised everyone.")),
      ]]),
    A("c05", "mercado-diario", "business", "2010-03-10T09:45:00Z",
      "Mercado reage ao relatório da inflação", [],
      [[
          S("O mercado reagiu com calma ao relatório da inflação."),
          S("João Pereira explicou que o consumo interno abrandou.", ["joao-pereira"],
            quote=("joao-pereira", "indirect", "o consumo interno abrandou.")),
      ]]),
    A("c06", "arts-weekly", "culture", "2010-03-26T14:00:00Z",
      "Santos announces a spring tour", ["maria-santos"],
      [[
          S("Maria Santos announced a spring tour across six cities.", ["maria-santos"]),
          S("The tour opens in Porto and closes in Seville."),
      ]]),
    A("c07", "mercado-diario", "business", "2010-04-09T10:00:00Z",
      "Inflation cools earlier than expected", [],
      [[
          S("Inflation cooled earlier than the spring forecast expected."),
          S("João Pereira admitted that the earlier warning was too dark.", ["joao-pereira"],
            quote=("joao-pereira", "indirect", "the earlier warning was too dark.")),
      ]]),
    A("c08", "arts-weekly", "culture", "2010-04-22T13:30:00Z",
      "Maria Santos grava novo álbum", ["maria-santos"],
      [[
          S("Maria Santos começou a gravar o novo álbum em Alfama.", ["maria-santos"]),
          S("Maria Santos disse que o disco chega em outubro.", ["maria-santos"],
            quote=("maria-santos", "indirect", "o disco chega em outubro.")),
      ]]),
    A("c09", "arts-weekly", "culture", "2010-05-30T12:15:00Z",
      "Summer program fills the museum", [],
      [
          [S("The summer program filled the museum for a third straight week."),
           S("Helena Faria thanked the volunteers at the opening.", ["helena-faria"])],
          [S("A new wing opens to the public in July.")],
      ], html=True),
    A("c10", "mercado-diario", "business", "2010-06-18T09:30:00Z",
      "Mid-year outlook steadies", [],
      [
          [S("The mid-year outlook steadied after two calm months."),
           S("João Pereira and Helena Faria discussed culture funding at the city forum.",
             ["joao-pereira", "helena-faria"])],
          [S("The forum returns in January.")],
      ], html=True),
]


def body_text(article) -> str:
    paragraphs = [" ".join(s["text"] for s in para) for para in article["paragraphs"]]
    if not article["html"]:
        return "\n\n".join(paragraphs)
    blocks = "".join(f"<p>{p}</p>" for p in paragraphs)
    return (
        "<html><head><title>site chrome</title></head><body>"
        '<nav><a href="/">Home</a> <a href="/latest">Latest</a></nav>'
        f"{blocks}"
        '<footer><a href="/about">About us</a> <a href="/contact">Contact</a></footer>'
        "</body></html>"
    )


def clean_text(article) -> str:
    return "\n\n".join(" ".join(s["text"] for s in para) for para in article["paragraphs"])


def bucket_of(published_at: str) -> str:
    stamp = datetime.fromisoformat(published_at.replace("Z", "+00:00"))
    return stamp.astimezone(timezone.utc).date().isoformat()


def gold_article(article) -> dict:
    sentences = []
    quotations = []
    professions = []
    # Body sentences always number from 1; index 0 is reserved for the title.
    index = 1
    if article["title"]:
        sentences.append({"index": 0, "text": article["title"], "entities": article["title_ents"]})
    for para in article["paragraphs"]:
        for sent in para:
            sentences.append({"index": index, "text": sent["text"], "entities": sent["ents"]})
            if sent["quote"]:
                eid, kind, text = sent["quote"]
                quotations.append(
                    {"entity_id": eid, "kind": kind, "text": text, "sentence_index": index}
                )
            if sent["prof"]:
                eid, descriptor = sent["prof"]
                professions.append(
                    {"entity_id": eid, "descriptor": descriptor, "sentence_index": index}
                )
            index += 1
    entity_set = sorted({e for s in sentences for e in s["entities"]})
    return {
        "doc_id": article["doc_id"],
        "source": article["source"],
        "category": article["category"],
        "published_at": article["published_at"],
        "bucket": bucket_of(article["published_at"]),
        "title": article["title"],
        "clean_text": clean_text(article),
        "sentences": sentences,
        "entity_set": entity_set,
        "quotations": quotations,
        "professions": professions,
    }


def build() -> tuple[list[dict], dict]:
    raws = []
    gold_articles = []
    for article in ARTICLES:
        raws.append(
            {
                "doc_id": article["doc_id"],
                "source": article["source"],
                "category": article["category"],
                "published_at": article["published_at"],
                "title": article["title"],
                "body": body_text(article),
            }
        )
        gold_articles.append(gold_article(article))
    entities: dict[str, dict] = {}
    for gold in gold_articles:
        for eid in gold["entity_set"]:
            entities.setdefault(
                eid, {"canonical_name": CANONICAL[eid], "professions": {}}
            )
        for prof in gold["professions"]:
            slot = entities[prof["entity_id"]]["professions"]
            slot[prof["descriptor"]] = slot.get(prof["descriptor"], 0) + 1
    gold = {
        "format": "chronolens-gold/1",
        "entities": {eid: entities[eid] for eid in sorted(entities)},
        "articles": gold_articles,
    }
    return raws, gold


def write_files(raws, gold) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with open(FIXTURES / "news_50.jsonl", "w", encoding="utf-8") as fh:
        for raw in raws:
            fh.write(json.dumps(raw, ensure_ascii=False, sort_keys=True) + "\n")
    lines = sorted(CANONICAL.values())
    lines.extend(f"{alias}\t{canon}" for alias, canon in sorted(ALIASES.items()))
    (FIXTURES / "gazetteer.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (FIXTURES / "gold.json").write_text(
        json.dumps(gold, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def verify(gold) -> int:
    """Diff the real pipeline against the gold data; return mismatch count."""
    from chronolens.ner import load_gazetteer
    from chronolens.service import ArchiveState, ingest_batch

    gaz = load_gazetteer(FIXTURES / "gazetteer.txt")
    state, report = ingest_batch(ArchiveState.empty(gazetteer=gaz), FIXTURES / "news_50.jsonl")
    problems = 0

    def complain(msg):
        nonlocal problems
        problems += 1
        print(f"MISMATCH: {msg}")

    if report.errors:
        complain(f"ingest errors: {[e.to_json() for e in report.errors]}")
    if report.articles != len(gold["articles"]):
        complain(f"articles {report.articles} != {len(gold['articles'])}")

    from chronolens.ingest import clean_article, raw_from_json, sentence_views

    by_doc = {g["doc_id"]: g for g in gold["articles"]}
    with open(FIXTURES / "news_50.jsonl", encoding="utf-8") as fh:
        for line in fh:
            raw = raw_from_json(json.loads(line))
            article = clean_article(raw)
            g = by_doc[raw.doc_id]
            if article.clean_text != g["clean_text"]:
                complain(f"{raw.doc_id}: clean text\n PIPE={article.clean_text!r}\n GOLD={g['clean_text']!r}")
            views = sentence_views(article)
            got = [(v.index, v.text) for v in views]
            want = [(s["index"], s["text"]) for s in g["sentences"]]
            if got != want:
                complain(f"{raw.doc_id}: sentences\n PIPE={got}\n GOLD={want}")

    # Mentions per sentence, via the snippets the index recorded.
    got_sent: dict[tuple[str, int], set[str]] = {}
    for eid, refs in state.index.snippet_refs.items():
        for doc_id, sidx, _bucket in refs:
            got_sent.setdefault((doc_id, sidx), set()).add(eid)
    want_sent: dict[tuple[str, int], set[str]] = {}
    for g in gold["articles"]:
        for s in g["sentences"]:
            if s["entities"]:
                want_sent[(g["doc_id"], s["index"])] = set(s["entities"])
    if got_sent != want_sent:
        for key in sorted(set(got_sent) | set(want_sent)):
            if got_sent.get(key) != want_sent.get(key):
                complain(f"snippets {key}: pipe={sorted(got_sent.get(key, ()))} gold={sorted(want_sent.get(key, ()))}")

    got_quotes = sorted(
        (q.doc_id, q.sentence_index, q.entity_id, q.kind, q.text) for q in state.quotations
    )
    want_quotes = sorted(
        (g["doc_id"], q["sentence_index"], q["entity_id"], q["kind"], q["text"])
        for g in gold["articles"]
        for q in g["quotations"]
    )
    if got_quotes != want_quotes:
        for q in sorted(set(got_quotes) ^ set(want_quotes)):
            side = "pipe-only" if q in set(got_quotes) else "gold-only"
            complain(f"quote {side}: {q}")

    for eid, expected in gold["entities"].items():
        profile = state.registry.get(eid)
        if profile is None:
            complain(f"entity missing: {eid}")
            continue
        if profile.canonical_name != expected["canonical_name"]:
            complain(f"{eid}: name {profile.canonical_name!r} != {expected['canonical_name']!r}")
        if dict(profile.professions) != expected["professions"]:
            complain(f"{eid}: professions {dict(profile.professions)} != {expected['professions']}")
    extra = set(state.registry.profiles) - set(gold["entities"])
    if extra:
        complain(f"unexpected entities: {sorted(extra)}")

    # Graph counts from gold entity sets.
    from itertools import combinations

    want_nodes: dict[str, dict[str, int]] = {}
    want_edges: dict[tuple[str, str], dict[str, int]] = {}
    for g in gold["articles"]:
        for eid in g["entity_set"]:
            want_nodes.setdefault(eid, {})
            want_nodes[eid][g["bucket"]] = want_nodes[eid].get(g["bucket"], 0) + 1
        for a, b in combinations(g["entity_set"], 2):
            want_edges.setdefault((a, b), {})
            want_edges[(a, b)][g["bucket"]] = want_edges[(a, b)].get(g["bucket"], 0) + 1
    got_nodes = {
        eid: {b.isoformat(): n for b, n in counts.items()}
        for eid, counts in state.graph.node_counts.items()
    }
    got_edges = {
        key: {b.isoformat(): n for b, n in counts.items()}
        for key, counts in state.graph.edge_counts.items()
    }
    if got_nodes != want_nodes:
        complain(f"graph nodes differ: pipe={got_nodes} gold={want_nodes}")
    if got_edges != want_edges:
        complain(f"graph edges differ: pipe={got_edges} gold={want_edges}")

    return problems


def main() -> int:
    raws, gold = build()
    write_files(raws, gold)
    print(f"wrote {len(raws)} articles, {len(gold['entities'])} entities")
    problems = verify(gold)
    if problems:
        print(f"{problems} mismatches")
        return 1
    print("verification clean")
    return 0


if __name__ == "__main__":
    sys.exit(main())
